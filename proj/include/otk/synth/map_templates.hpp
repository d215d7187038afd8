// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <vector>

#include "otk/core/lane_graph.hpp"
#include "otk/synth/config.hpp"

namespace otk::synth {

struct RouteSpec {
    std::vector<int> lane_ids;  // traversal order
    double weight = 1.0;
    bool turning = false;       // net heading change >= ~60 deg
};

struct MapTemplate {
    std::vector<LaneSpec> lanes;
    std::vector<RouteSpec> routes;
};

MapTemplate make_map_template(MapKind kind);

/// Concatenated centerline of a route (duplicate joint points removed).
std::vector<Vec2> route_polyline(const MapTemplate& map, const RouteSpec& route);

}  // namespace otk::synth
