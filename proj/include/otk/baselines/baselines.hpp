// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <optional>
#include <vector>

#include "otk/core/types.hpp"

namespace otk::baselines {

/// Constant-velocity associator: extrapolates the history's last position
/// with its last velocity and picks the candidate whose first observation is
/// closest to the prediction at that candidate's own first timestamp.
/// Candidates must pass the tau gate; returns nullopt when none do.
std::optional<int> cvm_associate(const Tracklet& history, const std::vector<Tracklet>& futures,
                                 double tau);

/// Linear pose interpolation on the sample grid strictly between the two
/// endpoint observations. Yaw follows the shortest angular arc.
std::vector<Pose2D> linear_interpolate(const Observation& history_end,
                                       const Observation& future_start, double rate);

}  // namespace otk::baselines
