// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace otk::completion {

/// Decoder query for one missing timestamp: seconds since the last history
/// observation and its fraction of the occlusion horizon.
struct TimeQuery {
    double t = 0.0;       // in (0, T)
    double t_norm = 0.0;  // t / T in (0, 1)
};

/// One query per missing sample timestamp of a `gap`-second occlusion at
/// `rate` Hz: t in {dt, 2 dt, ...}, count = round(gap * rate) - 1. Gaps of at
/// most one sample period have nothing to fill.
inline std::vector<TimeQuery> make_time_queries(double gap, double rate) {
    if (!(gap > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("make_time_queries: gap and rate must be positive");
    const int count = static_cast<int>(std::lround(gap * rate)) - 1;
    std::vector<TimeQuery> out;
    if (count <= 0) return out;
    const double dt = 1.0 / rate;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) out.push_back({k * dt, k * dt / gap});
    return out;
}

}  // namespace otk::completion
