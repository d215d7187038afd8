// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>

namespace otk::synth {

enum class MapKind { Straight, Curved, Intersection };

MapKind map_kind_from_string(const std::string& s);
std::string to_string(MapKind k);

struct NoiseConfig {
    double sigma_xy = 0.15;    // m
    double sigma_theta = 0.02; // rad
    double sigma_v = 0.3;      // m/s
};

struct SpeedConfig {
    double v_min = 3.0;        // initial speed range, m/s
    double v_max = 12.0;
    double v_floor = 1.0;      // simulation clamps
    double v_ceil = 15.0;
    double accel_min = -1.5;   // profile range (within the [-3, 2] clamp)
    double accel_max = 1.0;
};

struct FragmentationConfig {
    bool enabled = false;
    double fraction = 0.5;     // of eligible tracks
    double min_gap_s = 2.0;
    double max_gap_s = 8.0;
};

struct GeneratorConfig {
    MapKind map_template = MapKind::Intersection;
    int n_scenes = 200;
    int vehicle_count = 10;
    double duration_s = 20.0;
    double sample_rate_hz = 2.0;
    NoiseConfig noise;
    SpeedConfig speed;
    double maneuver_fraction = 0.15;  // lane-change / off-lane vehicles
    double stop_fraction = 0.25;      // vehicles that halt at a stop line
    double truck_fraction = 0.2;
    FragmentationConfig fragmentation;
};

struct OcclusionConfig {
    double min_duration_s = 1.5;
    double max_duration_s = 12.5;
    double max_history_s = 2.5;
    int candidates_min = 2;
    int candidates_max = 65;
};

}  // namespace otk::synth
