// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/core/lane_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "otk/core/geometry.hpp"

namespace otk {
namespace {

constexpr double kMaxLaneletLength = 20.0;
constexpr double kResolution = 1.0;
constexpr double kDegenerate = 1e-9;

struct Resampled {
    std::vector<Vec2> pts;
    std::vector<double> arc;  // cumulative arc length per point
    double spacing = kResolution;
};

double polyline_length(const std::vector<Vec2>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
    return len;
}

// Evenly spaced points along the polyline: n = round(L) intervals of L/n each,
// so spacing stays within 10% of 1 m for lanes longer than ~5 m.
Resampled resample(const std::vector<Vec2>& pts, double total) {
    Resampled out;
    const int n_int = std::max<int>(1, static_cast<int>(std::lround(total / kResolution)));
    out.spacing = total / n_int;
    out.pts.reserve(static_cast<std::size_t>(n_int) + 1);
    out.arc.reserve(static_cast<std::size_t>(n_int) + 1);

    std::size_t seg = 0;
    double seg_start = 0.0;
    double seg_len = (pts[1] - pts[0]).norm();
    for (int k = 0; k <= n_int; ++k) {
        const double s = std::min(total, k * out.spacing);
        while (seg + 2 < pts.size() && s > seg_start + seg_len) {
            seg_start += seg_len;
            ++seg;
            seg_len = (pts[seg + 1] - pts[seg]).norm();
        }
        const double f = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
        out.pts.push_back(pts[seg] + f * (pts[seg + 1] - pts[seg]));
        out.arc.push_back(s);
    }
    return out;
}

bool in_intervals(double s, const std::vector<std::pair<double, double>>& ivals) {
    for (const auto& [a, b] : ivals)
        if (s >= a && s <= b) return true;
    return false;
}

double tangent_heading(const std::vector<Vec2>& pts, std::size_t i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 < pts.size() ? i + 1 : i;
    const Vec2 d = pts[b] - pts[a];
    return std::atan2(d.y(), d.x());
}

}  // namespace

double Lanelet::arc_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < poses.size(); ++i) {
        const double dx = poses[i].x - poses[i - 1].x;
        const double dy = poses[i].y - poses[i - 1].y;
        len += std::hypot(dx, dy);
    }
    return len;
}

Vec2 Lanelet::centroid() const {
    Vec2 c(0.0, 0.0);
    for (const LanePose& p : poses) c += Vec2(p.x, p.y);
    return poses.empty() ? c : Vec2(c / static_cast<double>(poses.size()));
}

int LaneGraph::max_poses() const {
    int m = 0;
    for (const Lanelet& l : lanelets) m = std::max(m, static_cast<int>(l.poses.size()));
    return m;
}

std::pair<Mat, std::vector<bool>> LaneGraph::feature_block() const {
    const int l = max_poses();
    const int n = size();
    Mat block = Mat::Zero(n * l, LanePose::kWidth);
    std::vector<bool> mask(static_cast<std::size_t>(n * l), false);
    for (int i = 0; i < n; ++i) {
        const auto& poses = lanelets[static_cast<std::size_t>(i)].poses;
        for (int j = 0; j < static_cast<int>(poses.size()); ++j) {
            const LanePose& p = poses[static_cast<std::size_t>(j)];
            const int r = i * l + j;
            block(r, 0) = p.x;
            block(r, 1) = p.y;
            block(r, 2) = p.theta;
            block(r, 3) = std::cos(p.theta);
            block(r, 4) = std::sin(p.theta);
            block(r, 5) = p.end_flag;
            block(r, 6) = p.on_stop_line;
            block(r, 7) = p.on_crosswalk;
            mask[static_cast<std::size_t>(r)] = true;
        }
    }
    return {std::move(block), std::move(mask)};
}

LaneGraph LaneGraph::to_local_frame(const Pose2D& origin) const {
    LaneGraph out = *this;
    for (Lanelet& lane : out.lanelets) {
        for (LanePose& p : lane.poses) {
            const Pose2D local = otk::to_local_frame({p.x, p.y, p.theta}, origin);
            p.x = local.x;
            p.y = local.y;
            p.theta = local.theta;
        }
    }
    return out;
}

LaneGraph LaneGraph::crop(const std::vector<Vec2>& anchors, double radius) const {
    LaneGraph out;
    out.warnings = warnings;
    for (const Lanelet& lane : lanelets) {
        const Vec2 c = lane.centroid();
        const bool keep = std::any_of(anchors.begin(), anchors.end(), [&](const Vec2& a) {
            return (c - a).norm() <= radius;
        });
        if (keep) out.lanelets.push_back(lane);
    }
    return out;
}

LaneGraph build_lane_graph(const std::vector<LaneSpec>& lanes) {
    LaneGraph graph;
    int next_id = 0;
    // lane id -> (first lanelet id, last lanelet id) for topology wiring
    std::map<int, std::pair<int, int>> lane_span;

    for (const LaneSpec& lane : lanes) {
        if (lane.points.size() < 2) {
            ++graph.warnings;
            continue;
        }
        const double total = polyline_length(lane.points);
        if (total < kDegenerate) {
            ++graph.warnings;
            continue;
        }
        const Resampled rs = resample(lane.points, total);
        const int per_chunk = std::max<int>(
            1, static_cast<int>(std::floor(kMaxLaneletLength / rs.spacing + 1e-9)));
        const int n_pts = static_cast<int>(rs.pts.size());

        const int first_id = next_id;
        int start = 0;
        while (start + 1 < n_pts) {
            const int end = std::min(start + per_chunk, n_pts - 1);
            Lanelet ll;
            ll.id = next_id++;
            for (int i = start; i <= end; ++i) {
                LanePose p;
                p.x = rs.pts[static_cast<std::size_t>(i)].x();
                p.y = rs.pts[static_cast<std::size_t>(i)].y();
                p.theta = tangent_heading(rs.pts, static_cast<std::size_t>(i));
                p.end_flag = (i == n_pts - 1) ? 1 : 0;
                p.on_stop_line = in_intervals(rs.arc[static_cast<std::size_t>(i)], lane.stop_line) ? 1 : 0;
                p.on_crosswalk = in_intervals(rs.arc[static_cast<std::size_t>(i)], lane.crosswalk) ? 1 : 0;
                ll.poses.push_back(p);
            }
            if (ll.id > first_id) {
                ll.predecessors.push_back(ll.id - 1);
                graph.lanelets.back().successors.push_back(ll.id);
            }
            graph.lanelets.push_back(std::move(ll));
            start = end;
        }
        lane_span[lane.id] = {first_id, next_id - 1};
    }

    // lane-level successor topology: last lanelet of a lane -> first of each successor
    for (const LaneSpec& lane : lanes) {
        auto it = lane_span.find(lane.id);
        if (it == lane_span.end()) continue;
        for (int succ : lane.successors) {
            auto jt = lane_span.find(succ);
            if (jt == lane_span.end()) continue;
            graph.lanelets[static_cast<std::size_t>(it->second.second)].successors.push_back(
                jt->second.first);
            graph.lanelets[static_cast<std::size_t>(jt->second.first)].predecessors.push_back(
                it->second.second);
        }
    }
    return graph;
}

}  // namespace otk
