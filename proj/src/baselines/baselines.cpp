// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/baselines/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "otk/core/candidates.hpp"
#include "otk/core/geometry.hpp"

namespace otk::baselines {

std::optional<int> cvm_associate(const Tracklet& history, const std::vector<Tracklet>& futures,
                                 double tau) {
    const std::vector<int> cand = candidate_filter_indices(history, futures, tau);
    if (cand.empty()) return std::nullopt;
    const Observation& last = history.last();
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int idx : cand) {
        const Observation& first = futures[static_cast<std::size_t>(idx)].first();
        const double dt = first.t - last.t;
        const double px = last.x + last.vx * dt;
        const double py = last.y + last.vy * dt;
        const double d = std::hypot(px - first.x, py - first.y);
        if (d < best_dist) {
            best_dist = d;
            best = idx;
        }
    }
    return best;
}

std::vector<Pose2D> linear_interpolate(const Observation& history_end,
                                       const Observation& future_start, double rate) {
    if (future_start.t <= history_end.t)
        throw std::invalid_argument("linear_interpolate: future must start after history ends");
    const double dt = 1.0 / rate;
    const double gap = future_start.t - history_end.t;
    const double dyaw = wrap_angle(future_start.theta - history_end.theta);
    std::vector<Pose2D> out;
    for (int k = 1; k * dt < gap - 1e-9; ++k) {
        const double f = k * dt / gap;
        out.push_back({history_end.x + f * (future_start.x - history_end.x),
                       history_end.y + f * (future_start.y - history_end.y),
                       wrap_angle(history_end.theta + f * dyaw)});
    }
    return out;
}

}  // namespace otk::baselines
