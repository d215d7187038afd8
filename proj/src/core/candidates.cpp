// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/core/candidates.hpp"

#include <stdexcept>

namespace otk {

std::vector<int> candidate_filter_indices(const Tracklet& history,
                                          const std::vector<Tracklet>& all, double tau) {
    if (tau < 0.0) throw std::invalid_argument("candidate_filter: tau must be >= 0");
    if (history.empty()) throw std::invalid_argument("candidate_filter: empty history");
    std::vector<int> out;
    const double t_end = history.end_time();
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
        const Tracklet& c = all[static_cast<std::size_t>(i)];
        if (c.empty() || c.id == history.id) continue;
        if (c.start_time() - t_end > tau) out.push_back(i);
    }
    return out;
}

std::vector<Tracklet> candidate_filter(const Tracklet& history, const std::vector<Tracklet>& all,
                                       double tau) {
    std::vector<Tracklet> out;
    for (int i : candidate_filter_indices(history, all, tau))
        out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace otk
