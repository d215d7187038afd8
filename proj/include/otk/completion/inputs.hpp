// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <vector>

#include "otk/completion/time_queries.hpp"
#include "otk/core/features.hpp"
#include "otk/core/geometry.hpp"
#include "otk/core/lane_graph.hpp"
#include "otk/model_config.hpp"

namespace otk::completion {

/// Localized inputs for one gap. The frame origin is the midpoint of the gap
/// endpoints; the frame yaw is the bearing from history end to future start
/// (plus an optional training jitter). Features are the 6-wide variant.
struct CompletionInputs {
    Mat history;   // T_h x 6, scaled
    Mat future;    // T_f x 6, scaled
    Mat queries;   // k x 2: [t / scale_time, t_norm]
    std::vector<double> query_t;  // raw seconds since history end
    double gap = 0.0;
    Pose2D frame;  // local->global anchor

    std::vector<Mat> lane_feats;
    std::vector<std::vector<Vec2>> lane_pose_pos;
    std::vector<Vec2> lanelet_centroid;
    bool has_lanes = false;
};

CompletionInputs build_completion_inputs(const Tracklet& history, const Tracklet& future,
                                         const LaneGraph* graph, const ModelConfig& cfg,
                                         double rate, double frame_yaw_offset = 0.0);

}  // namespace otk::completion
