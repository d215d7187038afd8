// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cstdint>
#include <optional>

#include "otk/synth/config.hpp"
#include "otk/synth/scene.hpp"

namespace otk::synth {

/// Masks a scene around one target track: the history is randomly truncated
/// (>= 1 pose, span <= max_history_s) ending at a random cut; every same-class
/// track is masked from the cut for an on-grid duration drawn uniformly from
/// [min_duration_s, min(track remainder, max_duration_s)], always leaving at
/// least one visible pose. Deterministic per (scene, seed, target).
PseudoOcclusionSample mask_pseudo_occlusion(const SceneRecord& scene, std::uint64_t seed,
                                            const std::string& target_id,
                                            const OcclusionConfig& cfg = {});

/// True if the track can serve as a masking target under `cfg`.
bool mask_eligible(const Tracklet& track, double sample_rate, const OcclusionConfig& cfg);

/// All samples of a scene (one per eligible target), with the candidate-count
/// band applied: samples below candidates_min are dropped; above
/// candidates_max the candidate set is subsampled keeping the true match.
std::vector<PseudoOcclusionSample> build_samples(const SceneRecord& scene, std::uint64_t seed,
                                                 const OcclusionConfig& cfg);

struct AugmentNoise {
    double sigma_xy = 0.15;
    double sigma_theta = 0.02;
    double sigma_v = 0.3;
};

/// Training augmentation: rotates the whole sample (inputs and supervision)
/// by a uniform angle in +-rot_range about the history-end position, then adds
/// i.i.d. Gaussian noise to the input tracklets only. Labels are untouched.
PseudoOcclusionSample augment_sample(const PseudoOcclusionSample& sample, std::uint64_t seed,
                                     double rot_range, const AugmentNoise& noise);

}  // namespace otk::synth
