// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/synth/map_templates.hpp"

#include <cmath>
#include <stdexcept>

#include "otk/core/geometry.hpp"

namespace otk::synth {
namespace {

std::vector<Vec2> line(Vec2 a, Vec2 b) { return {a, b}; }

std::vector<Vec2> arc(Vec2 center, double r, double a0, double a1, int n = 24) {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double a = a0 + (a1 - a0) * i / n;
        pts.push_back(center + r * Vec2(std::cos(a), std::sin(a)));
    }
    return pts;
}

Vec2 rot90(Vec2 p, int quarter) {
    switch (((quarter % 4) + 4) % 4) {
        case 1: return {-p.y(), p.x()};
        case 2: return {-p.x(), -p.y()};
        case 3: return {p.y(), -p.x()};
        default: return p;
    }
}

MapTemplate straight_template() {
    MapTemplate map;
    int id = 0;
    // eastbound lanes
    for (double y : {0.0, 3.5, 7.0, 10.5}) {
        LaneSpec lane;
        lane.id = id++;
        lane.points = line({-100.0, y}, {100.0, y});
        map.lanes.push_back(lane);
        map.routes.push_back({{lane.id}, 1.0, false});
    }
    // westbound lanes
    for (double y : {-3.5, -7.0}) {
        LaneSpec lane;
        lane.id = id++;
        lane.points = line({100.0, y}, {-100.0, y});
        map.lanes.push_back(lane);
        map.routes.push_back({{lane.id}, 1.0, false});
    }
    return map;
}

MapTemplate curved_template() {
    MapTemplate map;
    int id = 0;
    // concentric arcs sweeping 120 degrees, counter-clockwise traffic
    for (double r : {40.0, 43.5, 47.0}) {
        LaneSpec lane;
        lane.id = id++;
        lane.points = arc({0.0, 0.0}, r, -kPi / 3.0, kPi / 3.0, 40);
        map.lanes.push_back(lane);
        map.routes.push_back({{lane.id}, 1.0, true});
    }
    // opposite direction pair further out
    for (double r : {52.0, 55.5}) {
        LaneSpec lane;
        lane.id = id++;
        lane.points = arc({0.0, 0.0}, r, kPi / 3.0, -kPi / 3.0, 40);
        map.lanes.push_back(lane);
        map.routes.push_back({{lane.id}, 1.0, true});
    }
    // s-curve crossing the arcs' chord: tangent-continuous pair of arcs
    {
        LaneSpec lane;
        lane.id = id++;
        const double join = kPi * 0.82;
        std::vector<Vec2> pts = arc({30.0, -60.0}, 35.0, kPi / 2.0, join, 24);
        const Vec2 c2 = pts.back() + 20.0 * Vec2(std::cos(join), std::sin(join));
        const std::vector<Vec2> second = arc(c2, 20.0, join - kPi, -kPi / 2.0, 18);
        pts.insert(pts.end(), second.begin() + 1, second.end());
        lane.points = std::move(pts);
        map.lanes.push_back(lane);
        map.routes.push_back({{lane.id}, 0.6, true});
    }
    return map;
}

// Four-way intersection with right-hand traffic. Base (eastbound) geometry is
// rotated by quarter turns for the other approaches. Lane ids per quarter q:
// in = 6q, thru = 6q+1, out = 6q+2, left = 6q+3, right = 6q+4, spare 6q+5.
MapTemplate intersection_template() {
    MapTemplate map;
    constexpr double half = 1.75;   // lane offset from road axis
    constexpr double box = 12.0;    // intersection half-size
    constexpr double reach = 80.0;  // approach length from the box

    // base eastbound geometry
    const std::vector<Vec2> in_pts = line({-box - reach, -half}, {-box, -half});
    const std::vector<Vec2> thru_pts = line({-box, -half}, {box, -half});
    const std::vector<Vec2> out_pts = line({box, -half}, {box + reach, -half});
    // left turn east->north: quarter arc, center (-box, box), r = box + half
    const std::vector<Vec2> left_pts = arc({-box, box}, box + half, -kPi / 2.0, 0.0, 20);
    // right turn east->south: quarter arc, center (-box, -box), r = box - half
    const std::vector<Vec2> right_pts = arc({-box, -box}, box - half, kPi / 2.0, 0.0, 16);

    const double in_len = reach;
    for (int q = 0; q < 4; ++q) {
        auto rotate_all = [&](const std::vector<Vec2>& pts) {
            std::vector<Vec2> out;
            out.reserve(pts.size());
            for (const Vec2& p : pts) out.push_back(rot90(p, q));
            return out;
        };
        const int base = 6 * q;
        LaneSpec in{base + 0, rotate_all(in_pts), {{in_len - 2.0, in_len}}, {{in_len - 6.0, in_len - 3.0}}, {}};
        LaneSpec thru{base + 1, rotate_all(thru_pts), {}, {}, {}};
        LaneSpec out{base + 2, rotate_all(out_pts), {}, {}, {}};
        LaneSpec left{base + 3, rotate_all(left_pts), {}, {}, {}};
        LaneSpec right{base + 4, rotate_all(right_pts), {}, {}, {}};
        // topology: in -> {thru, left, right}; connectors -> the matching out lane
        in.successors = {base + 1, base + 3, base + 4};
        thru.successors = {base + 2};
        left.successors = {((q + 1) % 4) * 6 + 2};   // east->north exit
        right.successors = {((q + 3) % 4) * 6 + 2};  // east->south exit
        map.lanes.push_back(in);
        map.lanes.push_back(thru);
        map.lanes.push_back(out);
        map.lanes.push_back(left);
        map.lanes.push_back(right);

        map.routes.push_back({{base + 0, base + 1, base + 2}, 0.5, false});
        map.routes.push_back({{base + 0, base + 3, ((q + 1) % 4) * 6 + 2}, 0.25, true});
        map.routes.push_back({{base + 0, base + 4, ((q + 3) % 4) * 6 + 2}, 0.25, true});
    }
    return map;
}

}  // namespace

MapKind map_kind_from_string(const std::string& s) {
    if (s == "straight") return MapKind::Straight;
    if (s == "curved") return MapKind::Curved;
    if (s == "intersection") return MapKind::Intersection;
    throw std::invalid_argument("unknown map template: " + s);
}

std::string to_string(MapKind k) {
    switch (k) {
        case MapKind::Straight: return "straight";
        case MapKind::Curved: return "curved";
        case MapKind::Intersection: return "intersection";
    }
    return "?";
}

MapTemplate make_map_template(MapKind kind) {
    switch (kind) {
        case MapKind::Straight: return straight_template();
        case MapKind::Curved: return curved_template();
        case MapKind::Intersection: return intersection_template();
    }
    throw std::invalid_argument("bad map kind");
}

std::vector<Vec2> route_polyline(const MapTemplate& map, const RouteSpec& route) {
    std::vector<Vec2> pts;
    for (int lane_id : route.lane_ids) {
        const LaneSpec* lane = nullptr;
        for (const LaneSpec& l : map.lanes)
            if (l.id == lane_id) lane = &l;
        if (!lane) throw std::invalid_argument("route references unknown lane");
        for (const Vec2& p : lane->points) {
            if (!pts.empty() && (pts.back() - p).norm() < 1e-9) continue;
            pts.push_back(p);
        }
    }
    return pts;
}

}  // namespace otk::synth
