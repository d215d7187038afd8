// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace otk {

using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

/// A single timed BEV pose. theta is counter-clockwise positive in (-pi, pi].
struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// One detection/annotation of a vehicle at time t (seconds from scene start).
/// s is the detector confidence in [0,1]; vx,vy are global-frame velocities.
struct Observation {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double l = 4.5;
    double w = 1.9;
    double h = 1.6;
    double s = 1.0;
    double vx = 0.0;
    double vy = 0.0;

    Pose2D pose() const { return {x, y, theta}; }
};

/// A contiguous track fragment: non-empty, strictly increasing timestamps,
/// single object class.
struct Tracklet {
    std::string id;
    std::string cls = "car";
    std::vector<Observation> obs;

    bool empty() const { return obs.empty(); }
    const Observation& first() const { return obs.front(); }
    const Observation& last() const { return obs.back(); }
    double start_time() const { return obs.front().t; }
    double end_time() const { return obs.back().t; }
    double duration() const { return obs.back().t - obs.front().t; }

    void validate() const {
        if (obs.empty()) throw std::invalid_argument("tracklet '" + id + "' has no observations");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const Observation& o = obs[i];
            if (o.s < 0.0 || o.s > 1.0) throw std::invalid_argument("confidence outside [0,1]");
            if (o.l <= 0.0 || o.w <= 0.0 || o.h <= 0.0) throw std::invalid_argument("non-positive box size");
            if (i > 0 && obs[i].t <= obs[i - 1].t)
                throw std::invalid_argument("tracklet '" + id + "' timestamps not strictly increasing");
        }
    }
};

/// Per-observation feature rows in a local agent frame.
/// Wide layout (8): [x, y, theta, t, cos(theta), sin(theta), vx, vy].
/// Narrow layout (6): same without the velocity columns.
struct TrackletFeatures {
    Mat matrix;  // T x 8 or T x 6

    int rows() const { return static_cast<int>(matrix.rows()); }
    int width() const { return static_cast<int>(matrix.cols()); }
};

}  // namespace otk
