// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include "otk/core/types.hpp"

namespace otk {

/// Builds per-observation feature rows for a tracklet, expressed in the frame
/// of `origin`. The time column is obs.t - t0. With include_velocity the rows
/// are [x, y, theta, t, cos, sin, vx, vy] (width 8); without, the velocity
/// columns are dropped (width 6). Velocities are rotated into the frame.
TrackletFeatures tracklet_features(const Tracklet& trk, const Pose2D& origin, double t0,
                                   bool include_velocity);

}  // namespace otk
