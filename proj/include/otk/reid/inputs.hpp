// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <vector>

#include "otk/core/features.hpp"
#include "otk/core/lane_graph.hpp"
#include "otk/model_config.hpp"
#include "otk/synth/scene.hpp"

namespace otk::reid {

/// Localized, scale-normalized network inputs for one history and its
/// candidate set. Positions kept alongside features are unscaled local meters
/// (used for radius gating only).
struct ReidInputs {
    Mat history;                                 // T x 8, scaled
    std::vector<Mat> futures;                    // per candidate, scaled
    std::vector<Vec2> future_first_pos;          // local frame
    std::vector<Mat> lane_feats;                 // per lanelet: l x 8, scaled
    std::vector<std::vector<Vec2>> lane_pose_pos;
    std::vector<Vec2> lanelet_centroid;
    bool has_lanes = false;
};

/// Scales feature columns in place: [x,y,theta,t,cos,sin,(vx,vy)].
void scale_tracklet_features(Mat& feats, const ModelConfig& cfg);

/// Builds inputs in the frame of the history's last observation (yaw offset
/// lets training jitter the frame coherently for tracklets and lanes alike).
ReidInputs build_reid_inputs(const Tracklet& history, const std::vector<Tracklet>& futures,
                             const LaneGraph* graph, const ModelConfig& cfg,
                             double frame_yaw_offset = 0.0);

inline ReidInputs build_reid_inputs(const synth::PseudoOcclusionSample& sample,
                                    const LaneGraph* graph, const ModelConfig& cfg,
                                    double frame_yaw_offset = 0.0) {
    return build_reid_inputs(sample.history, sample.future_candidates, graph, cfg,
                             frame_yaw_offset);
}

}  // namespace otk::reid
