// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <map>
#include <string>
#include <vector>

#include "otk/core/lane_graph.hpp"
#include "otk/core/types.hpp"

namespace otk::synth {

/// One serialized scene: lane map plus tracks sampled on a common time grid.
/// For generated data `gt_tracks` holds ground truth; for fragmented inputs it
/// holds the observed tracklets and `provenance` maps tracklet id -> source
/// ground-truth track id.
struct SceneRecord {
    std::string scene_id;
    double sample_rate = 2.0;  // Hz
    LaneGraph lane_graph;
    std::vector<Tracklet> gt_tracks;
    std::map<std::string, std::string> provenance;

    double period() const { return 1.0 / sample_rate; }
    const Tracklet* find_track(const std::string& id) const {
        for (const Tracklet& t : gt_tracks)
            if (t.id == id) return &t;
        return nullptr;
    }
};

/// A masked training/evaluation sample: truncated history, masked future
/// candidates, the index of the true continuation, and the hidden segment
/// kept for completion supervision.
struct PseudoOcclusionSample {
    std::string scene_id;
    std::string target_id;
    Tracklet history;
    std::vector<Tracklet> future_candidates;
    int gt_match_index = -1;
    double occlusion_duration = 0.0;     // gap of the target pair, seconds
    std::vector<Pose2D> masked_gt;       // hidden target poses
    std::vector<double> masked_t;        // their timestamps
    double sample_rate = 2.0;

    const Tracklet& gt_future() const { return future_candidates[static_cast<std::size_t>(gt_match_index)]; }
};

}  // namespace otk::synth
