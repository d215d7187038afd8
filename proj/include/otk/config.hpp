// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "otk/model_config.hpp"
#include "otk/synth/config.hpp"
#include "otk/synth/occlusion.hpp"

namespace otk {

struct TrainingConfig {
    int epochs = 15;
    int batch_size = 64;
    double lr = 1e-3;
    double decay_reid = 0.6;        // lr factor every decay_every epochs
    double decay_completion = 0.5;
    int decay_every = 10;
    double weight_decay = 0.01;
    double val_fraction = 0.15;     // scenes held out for validation
    double rot_range = 0.0;         // sample rotation augmentation, radians
    double frame_jitter = 0.3;      // coherent local-frame yaw jitter, radians
    synth::AugmentNoise noise;      // augmentation noise on inputs
    int max_train_samples = 0;      // 0 = use all

    double decay_factor(const std::string& model) const {
        return model == "completion" ? decay_completion : decay_reid;
    }
};

struct ThresholdConfig {
    double tau = 1.5;          // death-memory horizon, s
    double association = 0.9;  // threshold on both affinities
    double fusion_w = 0.5;     // weight of the map branch
    double gap_dist = 3.0;     // model-path spatial bound, m
    double gap_time = 1.8;     // model-path temporal bound, s
};

struct EvalConfig {
    double match_radius = 2.0;    // IDS/recall center matching, m
    double miss_threshold = 2.0;  // MR threshold on max pointwise error, m
};

struct PathsConfig {
    std::string scenes = "scenes.jsonl";
    std::string checkpoints = ".";
    std::string reports = ".";
};

/// Full declarative run configuration; a run is determined by (config, seed).
struct RunConfig {
    std::uint64_t seed = 7;
    PathsConfig paths;
    synth::GeneratorConfig generator;
    synth::OcclusionConfig occlusion;
    ModelConfig model;
    TrainingConfig training;
    ThresholdConfig thresholds;
    EvalConfig eval;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::string& path);
    void validate() const;

    /// Hash of the sections a checkpoint depends on (model + feature scales).
    std::string model_hash() const;
};

std::string fnv1a_hex(const std::string& data);

}  // namespace otk
