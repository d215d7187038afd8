// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "otk/completion/complete.hpp"
#include "otk/config.hpp"
#include "otk/eval/metrics.hpp"
#include "otk/io/jsonl.hpp"
#include "otk/reid/association.hpp"
#include "otk/synth/scene.hpp"

namespace otk::pipeline {

struct InferModels {
    const reid::MotionNet<float>* motion = nullptr;
    nn::ParamStore<float>* motion_params = nullptr;
    const reid::MapNet<float>* map = nullptr;
    nn::ParamStore<float>* map_params = nullptr;
    const completion::CompletionNet<float>* completion = nullptr;
    nn::ParamStore<float>* completion_params = nullptr;
};

/// Full offline pass over one scene of tracklets: candidate gate, affinities,
/// fusion, greedy matching, chain merging, and gap completion. Unmatched
/// tracklets pass through unchanged.
io::CompletedScene infer_scene(const synth::SceneRecord& scene, const InferModels& models,
                               const RunConfig& cfg);

/// Constant-velocity association plus linear gap interpolation (the
/// non-learned reference pipeline).
io::CompletedScene baseline_scene(const synth::SceneRecord& scene, const RunConfig& cfg);

/// Metrics over aligned (prediction, ground-truth) scene files.
eval::EvalReport evaluate_scenes(const std::vector<io::CompletedScene>& preds,
                                 const std::vector<synth::SceneRecord>& gts,
                                 const EvalConfig& cfg);

/// Runs jobs 0..n-1 on `workers` threads, preserving result order.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Histograms for the generation sidecar (per pseudo-occlusion sample).
struct GenerateStats {
    std::map<int, int> candidate_count_hist;
    std::map<int, int> occlusion_duration_hist;  // key: duration in ms
    int n_samples = 0;

    nlohmann::json to_json() const;
};

GenerateStats collect_stats(const std::vector<synth::SceneRecord>& scenes,
                            const synth::OcclusionConfig& occ, std::uint64_t seed);

}  // namespace otk::pipeline
