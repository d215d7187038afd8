// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <vector>

#include "otk/completion/network.hpp"
#include "otk/core/lane_graph.hpp"

namespace otk::completion {

/// A gap is treated as a possible occlusion (model path) when it is spatially
/// larger than `dist_m` OR temporally longer than `time_s`.
struct GapPolicy {
    double dist_m = 3.0;
    double time_s = 1.8;
};

inline bool use_model_path(double gap_dist, double gap_time, const GapPolicy& policy = {}) {
    return gap_dist > policy.dist_m || gap_time > policy.time_s;
}

struct CompletedTrack {
    std::string track_id;
    std::vector<Pose2D> poses;   // one per missing sample time, global frame
    std::vector<double> times;
    enum class Source { Model, Linear } source = Source::Linear;
};

/// Fills the gap between a matched pair on the sample grid. Small gaps are
/// linearly interpolated; larger ones run the completion network (initial
/// decode plus lane refinement when a map is available).
CompletedTrack complete_track(const Tracklet& history, const Tracklet& future,
                              const LaneGraph* graph, const CompletionNet<float>* net,
                              nn::ParamStore<float>* params, double rate,
                              const GapPolicy& policy = {});

}  // namespace otk::completion
