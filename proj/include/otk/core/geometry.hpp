// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "otk/core/types.hpp"

namespace otk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("wrap_angle: non-finite input");
    double r = std::remainder(a, kTwoPi);  // lands in [-pi, pi]
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Rotates a global-frame vector into the frame of a pose with yaw `theta`.
inline Vec2 rotate_into_frame(const Vec2& v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

/// Rotates a local-frame vector back into the global frame.
inline Vec2 rotate_out_of_frame(const Vec2& v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Rigid SE(2) change of frame: expresses `p` in the frame anchored at `origin`.
/// The origin pose maps to (0,0,0).
inline Pose2D to_local_frame(const Pose2D& p, const Pose2D& origin) {
    Vec2 d = rotate_into_frame({p.x - origin.x, p.y - origin.y}, origin.theta);
    return {d.x(), d.y(), wrap_angle(p.theta - origin.theta)};
}

/// Inverse of to_local_frame.
inline Pose2D from_local_frame(const Pose2D& p, const Pose2D& origin) {
    Vec2 d = rotate_out_of_frame({p.x, p.y}, origin.theta);
    return {origin.x + d.x(), origin.y + d.y(), wrap_angle(p.theta + origin.theta)};
}

inline std::vector<Pose2D> to_local_frame(const std::vector<Pose2D>& poses, const Pose2D& origin) {
    std::vector<Pose2D> out;
    out.reserve(poses.size());
    for (const Pose2D& p : poses) out.push_back(to_local_frame(p, origin));
    return out;
}

inline std::vector<Pose2D> from_local_frame(const std::vector<Pose2D>& poses, const Pose2D& origin) {
    std::vector<Pose2D> out;
    out.reserve(poses.size());
    for (const Pose2D& p : poses) out.push_back(from_local_frame(p, origin));
    return out;
}

}  // namespace otk
