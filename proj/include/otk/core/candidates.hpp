// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <vector>

#include "otk/core/types.hpp"

namespace otk {

/// Future-candidate gate: keeps tracklets that start strictly more than `tau`
/// seconds after the history's last observation. The history itself is never
/// a candidate.
std::vector<Tracklet> candidate_filter(const Tracklet& history, const std::vector<Tracklet>& all,
                                       double tau);

/// Index variant: positions into `all` that pass the gate.
std::vector<int> candidate_filter_indices(const Tracklet& history,
                                          const std::vector<Tracklet>& all, double tau);

}  // namespace otk
