// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

namespace otk {

/// Shared network hyperparameters. Hidden width applies to every GRU/MLP;
/// feature scales divide position/time/velocity columns before the first
/// layer; radii are in meters on unscaled local coordinates.
struct ModelConfig {
    int hidden = 32;
    double attention_radius = 10.0;   // agent-to-lane-pose spatial attention
    double node_radius = 25.0;        // lanelet-node-to-agent attention (centroids)
    double crop_radius = 40.0;        // lanelet crop around sample anchors
    double scale_pos = 10.0;
    double scale_time = 5.0;
    double scale_vel = 5.0;
};

}  // namespace otk
