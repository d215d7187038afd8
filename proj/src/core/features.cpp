// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/core/features.hpp"

#include <cmath>
#include <stdexcept>

#include "otk/core/geometry.hpp"

namespace otk {

TrackletFeatures tracklet_features(const Tracklet& trk, const Pose2D& origin, double t0,
                                   bool include_velocity) {
    if (trk.empty()) throw std::invalid_argument("tracklet_features: empty tracklet");
    const int width = include_velocity ? 8 : 6;
    Mat m(static_cast<int>(trk.obs.size()), width);
    for (int i = 0; i < m.rows(); ++i) {
        const Observation& o = trk.obs[static_cast<std::size_t>(i)];
        const Pose2D local = to_local_frame(o.pose(), origin);
        m(i, 0) = local.x;
        m(i, 1) = local.y;
        m(i, 2) = local.theta;
        m(i, 3) = o.t - t0;
        m(i, 4) = std::cos(local.theta);
        m(i, 5) = std::sin(local.theta);
        if (include_velocity) {
            const Vec2 v = rotate_into_frame({o.vx, o.vy}, origin.theta);
            m(i, 6) = v.x();
            m(i, 7) = v.y();
        }
    }
    return {std::move(m)};
}

}  // namespace otk
