// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <utility>
#include <vector>

#include "otk/core/types.hpp"

namespace otk {

/// One resampled lane-centerline pose. Feature width is exactly 8:
/// [x, y, theta, cos(theta), sin(theta), end_flag, on_stop_line, on_crosswalk].
struct LanePose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    int end_flag = 0;      // 1 only on the final pose of a lane
    int on_stop_line = 0;
    int on_crosswalk = 0;

    static constexpr int kWidth = 8;
};

/// A lane-centerline section of at most 20 m, sampled at ~1 m.
struct Lanelet {
    int id = 0;
    std::vector<LanePose> poses;
    std::vector<int> successors;
    std::vector<int> predecessors;

    double arc_length() const;
    Vec2 centroid() const;
};

/// Vectorized map: lanelet nodes used as a fully connected attention graph.
struct LaneGraph {
    std::vector<Lanelet> lanelets;
    int warnings = 0;  // degenerate input polylines skipped

    int size() const { return static_cast<int>(lanelets.size()); }
    bool empty() const { return lanelets.empty(); }

    /// Returns the max pose count over lanelets (the padded sub-node length l).
    int max_poses() const;

    /// Zero-padded node feature block, one (l x 8) slab per lanelet, row-major
    /// stacked into (N_lane*l) x 8, with a parallel validity mask.
    std::pair<Mat, std::vector<bool>> feature_block() const;

    /// Expresses every lane pose in the frame of `origin` (flags unchanged).
    LaneGraph to_local_frame(const Pose2D& origin) const;

    /// Keeps only lanelets whose centroid lies within `radius` of any anchor.
    LaneGraph crop(const std::vector<Vec2>& anchors, double radius) const;
};

/// Source description of one lane: a centerline polyline plus arc-length
/// intervals flagged as stop line / crosswalk. `successors` name lane ids.
struct LaneSpec {
    int id = 0;
    std::vector<Vec2> points;
    std::vector<std::pair<double, double>> stop_line;   // [from_m, to_m] along arc
    std::vector<std::pair<double, double>> crosswalk;
    std::vector<int> successors;
};

/// Resamples each lane at ~1 m arc length, splits it into <=20 m lanelets
/// (consecutive lanelets share the boundary pose), links the chain plus the
/// lane-level successor topology, and sets the end flag on the final pose of
/// each lane. Zero-length polylines are skipped and counted in `warnings`.
LaneGraph build_lane_graph(const std::vector<LaneSpec>& lanes);

}  // namespace otk
