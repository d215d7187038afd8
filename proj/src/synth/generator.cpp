// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "otk/common/rng.hpp"
#include "otk/core/geometry.hpp"
#include "otk/synth/map_templates.hpp"

namespace otk::synth {
namespace {

constexpr double kSlotSpacing = 30.0;

/// Arc-length parameterized route path.
class Path {
public:
    explicit Path(std::vector<Vec2> pts) : pts_(std::move(pts)) {
        arc_.resize(pts_.size(), 0.0);
        for (std::size_t i = 1; i < pts_.size(); ++i)
            arc_[i] = arc_[i - 1] + (pts_[i] - pts_[i - 1]).norm();
    }

    double length() const { return arc_.back(); }

    Vec2 at(double s) const {
        s = std::clamp(s, 0.0, length());
        const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - arc_.begin()),
                                               pts_.size() - 1);
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const double seg = arc_[hi] - arc_[lo];
        const double f = seg > 0 ? (s - arc_[lo]) / seg : 0.0;
        return pts_[lo] + f * (pts_[hi] - pts_[lo]);
    }

    Vec2 tangent(double s) const {
        const double ds = 0.25;
        const Vec2 d = at(std::min(s + ds, length())) - at(std::max(s - ds, 0.0));
        const double n = d.norm();
        return n > 1e-12 ? Vec2(d / n) : Vec2(1.0, 0.0);
    }

    Vec2 left_normal(double s) const {
        const Vec2 t = tangent(s);
        return {-t.y(), t.x()};
    }

private:
    std::vector<Vec2> pts_;
    std::vector<double> arc_;
};

struct SpeedProfile {
    // piecewise-constant acceleration segments of ~3 s
    std::vector<double> accel;
    double seg_len = 3.0;
    double v0 = 8.0;
    double floor = 1.0, ceil = 15.0;

    // optional stop event (closed form): cruise at v0, brake to zero at
    // stop_arc, wait, accelerate back out
    bool has_stop = false;
    double stop_arc = 0.0;  // distance from spawn to the stop point
    double wait_s = 4.0;
    double brake = 2.5;
    double go_accel = 1.2;
    double v_exit = 8.0;

    std::pair<double, double> advance(double t) const {
        return has_stop ? advance_stop(t) : advance_profile(t);
    }

    std::pair<double, double> advance_profile(double t) const {
        double v = v0, dist = 0.0, remaining = t;
        std::size_t k = 0;
        while (remaining > 1e-12) {
            const double dt = std::min(remaining, seg_len);
            const double a = k < accel.size() ? accel[k] : 0.0;
            // integrate with clamping at the speed limits
            double v_end = std::clamp(v + a * dt, floor, ceil);
            // exact integral of clamped linear speed
            if (std::abs(a) < 1e-12 || v_end == v) {
                dist += v * dt;
            } else {
                const double t_hit = (v_end - v) / a;  // time until clamp (<= dt)
                dist += v * t_hit + 0.5 * a * t_hit * t_hit + v_end * (dt - t_hit);
            }
            v = v_end;
            remaining -= dt;
            ++k;
        }
        return {dist, v};
    }

    std::pair<double, double> advance_stop(double t) const {
        const double d_brake = v0 * v0 / (2.0 * brake);
        const double d_cruise = std::max(0.0, stop_arc - d_brake);
        const double b = d_cruise > 0.0 ? brake : v0 * v0 / (2.0 * std::max(1.0, stop_arc));
        const double t1 = d_cruise / v0;      // cruise ends
        const double t2 = t1 + v0 / b;        // stopped
        const double t3 = t2 + wait_s;        // moving again
        const double t4 = t3 + v_exit / go_accel;  // back at speed
        if (t <= t1) return {v0 * t, v0};
        if (t <= t2) {
            const double u = t - t1;
            return {d_cruise + v0 * u - 0.5 * b * u * u, v0 - b * u};
        }
        const double d_stop = d_cruise + v0 * v0 / (2.0 * b);
        if (t <= t3) return {d_stop, 0.0};
        if (t <= t4) {
            const double u = t - t3;
            return {d_stop + 0.5 * go_accel * u * u, go_accel * u};
        }
        const double d4 = d_stop + 0.5 * v_exit * v_exit / go_accel;
        return {d4 + v_exit * (t - t4), v_exit};
    }
};

struct VehiclePlan {
    int route_idx = 0;
    double s0 = 0.0;
    int spawn_step = 0;
    SpeedProfile speed;
    double lat_base = 0.0;     // persistent in-lane offset (driver signature)
    double lat_target = 0.0;   // lateral maneuver amplitude (0 = lane keeping)
    double lat_start_s = 0.0;  // arc length where the maneuver begins
    double lat_ramp = 20.0;    // arc length of the ramp
    std::string cls = "car";
    double l = 4.5, w = 1.9, h = 1.6;
};

double smoothstep(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

double lateral_offset(const VehiclePlan& plan, double s) {
    if (plan.lat_target == 0.0) return plan.lat_base;
    return plan.lat_base + plan.lat_target * smoothstep((s - plan.lat_start_s) / plan.lat_ramp);
}

Vec2 true_position(const Path& path, const VehiclePlan& plan, double s) {
    return path.at(s) + lateral_offset(plan, s) * path.left_normal(s);
}

/// Arc-length position of the first stop line along a route, if any.
std::optional<double> route_stop_arc(const MapTemplate& map, const RouteSpec& route) {
    double acc = 0.0;
    for (int lane_id : route.lane_ids) {
        const LaneSpec* lane = nullptr;
        for (const LaneSpec& l : map.lanes)
            if (l.id == lane_id) lane = &l;
        if (!lane) return std::nullopt;
        double len = 0.0;
        for (std::size_t i = 1; i < lane->points.size(); ++i)
            len += (lane->points[i] - lane->points[i - 1]).norm();
        if (!lane->stop_line.empty()) return acc + lane->stop_line.front().first + 1.0;
        acc += len;
    }
    return std::nullopt;
}

}  // namespace

int scene_capacity(const GeneratorConfig& config) {
    const MapTemplate map = make_map_template(config.map_template);
    int capacity = 0;
    for (const RouteSpec& r : map.routes) {
        const Path path(route_polyline(map, r));
        capacity += std::max(1, static_cast<int>(std::floor(path.length() / kSlotSpacing)));
    }
    return capacity;
}

SceneRecord generate_scene(std::uint64_t seed, const GeneratorConfig& config) {
    if (config.vehicle_count < 1) throw std::invalid_argument("generate_scene: vehicle_count < 1");
    if (config.sample_rate_hz <= 0) throw std::invalid_argument("generate_scene: bad sample rate");
    const MapTemplate map = make_map_template(config.map_template);

    std::vector<Path> paths;
    paths.reserve(map.routes.size());
    for (const RouteSpec& r : map.routes) paths.emplace_back(route_polyline(map, r));

    // spawn slots: (route, slot index)
    std::vector<std::pair<int, int>> slots;
    for (int r = 0; r < static_cast<int>(map.routes.size()); ++r) {
        const int n = std::max(1, static_cast<int>(std::floor(paths[static_cast<std::size_t>(r)].length() / kSlotSpacing)));
        for (int k = 0; k < n; ++k) slots.push_back({r, k});
    }
    if (config.vehicle_count > static_cast<int>(slots.size()))
        throw std::invalid_argument(
            "generate_scene: vehicle count " + std::to_string(config.vehicle_count) +
            " exceeds lane capacity " + std::to_string(slots.size()));

    Rng rng(seed);
    // weighted-ish deterministic shuffle of slots
    for (std::size_t i = slots.size(); i > 1; --i)
        std::swap(slots[i - 1], slots[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);

    const double period = 1.0 / config.sample_rate_hz;
    const int n_steps = static_cast<int>(std::floor(config.duration_s / period + 1e-9));

    std::vector<VehiclePlan> plans;
    for (int v = 0; v < config.vehicle_count; ++v) {
        VehiclePlan plan;
        plan.route_idx = slots[static_cast<std::size_t>(v)].first;
        plan.s0 = slots[static_cast<std::size_t>(v)].second * kSlotSpacing + rng.uniform(0.0, 8.0);
        plan.spawn_step = rng.bernoulli(0.3) ? static_cast<int>(rng.uniform_int(0, std::max(1, n_steps / 3))) : 0;
        plan.speed.v0 = rng.uniform(config.speed.v_min, config.speed.v_max);
        plan.speed.floor = config.speed.v_floor;
        plan.speed.ceil = config.speed.v_ceil;
        plan.lat_base = rng.uniform(-0.45, 0.45);
        const int n_segs = static_cast<int>(std::ceil(config.duration_s / plan.speed.seg_len)) + 1;
        for (int k = 0; k < n_segs; ++k)
            plan.speed.accel.push_back(rng.uniform(config.speed.accel_min, config.speed.accel_max));
        if (rng.bernoulli(config.maneuver_fraction)) {
            // lane change to an adjacent lane or an off-lane drift
            plan.lat_target = rng.bernoulli(0.5) ? (rng.bernoulli(0.5) ? 3.5 : -3.5)
                                                 : rng.uniform(-2.5, 2.5);
            const double len = paths[static_cast<std::size_t>(plan.route_idx)].length();
            plan.lat_start_s = rng.uniform(plan.s0, std::max(plan.s0 + 1.0, len * 0.7));
        }
        if (rng.bernoulli(config.stop_fraction)) {
            const auto stop =
                route_stop_arc(map, map.routes[static_cast<std::size_t>(plan.route_idx)]);
            if (stop.has_value() && *stop - plan.s0 > 8.0) {
                plan.speed.has_stop = true;
                plan.speed.stop_arc = *stop - plan.s0;
                plan.speed.wait_s = rng.uniform(2.0, 6.0);
                plan.speed.v_exit = rng.uniform(5.0, 9.0);
            }
        }
        if (rng.bernoulli(config.truck_fraction)) {
            plan.cls = "truck";
            plan.l = rng.uniform(7.0, 8.2);
            plan.w = rng.uniform(2.3, 2.6);
            plan.h = rng.uniform(2.8, 3.2);
        } else {
            plan.l = rng.uniform(4.2, 4.9);
            plan.w = rng.uniform(1.8, 2.0);
            plan.h = rng.uniform(1.5, 1.7);
        }
        plans.push_back(plan);
    }

    // one vehicle is pinned to a turning route so intersection scenes always
    // contain a large heading change
    if (config.map_template == MapKind::Intersection && !plans.empty()) {
        for (int r = 0; r < static_cast<int>(map.routes.size()); ++r) {
            if (!map.routes[static_cast<std::size_t>(r)].turning) continue;
            plans[0].route_idx = r;
            plans[0].s0 = std::max(0.0, 55.0 + rng.uniform(0.0, 5.0));
            plans[0].spawn_step = 0;
            plans[0].speed.v0 = std::max(8.0, plans[0].speed.v0);
            plans[0].speed.has_stop = false;
            plans[0].lat_target = 0.0;
            break;
        }
    }

    SceneRecord scene;
    scene.scene_id = "scene-" + std::to_string(seed);
    scene.sample_rate = config.sample_rate_hz;
    scene.lane_graph = build_lane_graph(map.lanes);

    for (int v = 0; v < static_cast<int>(plans.size()); ++v) {
        const VehiclePlan& plan = plans[static_cast<std::size_t>(v)];
        const Path& path = paths[static_cast<std::size_t>(plan.route_idx)];
        Tracklet trk;
        trk.id = "v" + std::to_string(v);
        trk.cls = plan.cls;
        for (int k = plan.spawn_step; k <= n_steps; ++k) {
            const double t = k * period;
            const double t_rel = t - plan.spawn_step * period;
            const auto [dist, speed] = plan.speed.advance(t_rel);
            const double s = plan.s0 + dist;
            if (s > path.length()) break;
            const Vec2 p = true_position(path, plan, s);
            // finite-difference heading/velocity on the true (noise-free) motion
            const double hdt = 0.1;
            const double t_f = t_rel + hdt;
            const double t_b = std::max(0.0, t_rel - hdt);
            const auto [d_fwd, v_fwd] = plan.speed.advance(t_f);
            const double s_fwd = std::min(plan.s0 + d_fwd, path.length());
            const double s_bwd = plan.s0 + plan.speed.advance(t_b).first;
            const Vec2 p_fwd = true_position(path, plan, s_fwd);
            const Vec2 p_bwd = true_position(path, plan, s_bwd);
            const Vec2 vel = (p_fwd - p_bwd) / (t_f - t_b);
            const Vec2 dir = p_fwd - p_bwd;
            const double heading = (dir.norm() > 1e-9 && speed > 0.05)
                                       ? std::atan2(dir.y(), dir.x())
                                       : std::atan2(path.tangent(s).y(), path.tangent(s).x());

            Observation o;
            o.t = t;
            o.x = p.x() + rng.normal(0.0, config.noise.sigma_xy);
            o.y = p.y() + rng.normal(0.0, config.noise.sigma_xy);
            o.theta = wrap_angle(heading + rng.normal(0.0, config.noise.sigma_theta));
            o.l = plan.l;
            o.w = plan.w;
            o.h = plan.h;
            o.s = rng.uniform(0.5, 1.0);
            o.vx = vel.x() + rng.normal(0.0, config.noise.sigma_v);
            o.vy = vel.y() + rng.normal(0.0, config.noise.sigma_v);
            trk.obs.push_back(o);
        }
        if (static_cast<int>(trk.obs.size()) >= 2) scene.gt_tracks.push_back(std::move(trk));
    }
    return scene;
}

}  // namespace otk::synth
