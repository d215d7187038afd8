// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cstdint>

#include "otk/synth/config.hpp"
#include "otk/synth/scene.hpp"

namespace otk::synth {

/// Deterministic scene synthesis: vehicles follow lane centerlines with
/// piecewise-constant-acceleration speed profiles, a configurable fraction
/// performing lane changes or off-lane maneuvers; Gaussian observation noise
/// on pose and velocity. Pure function of (seed, config).
SceneRecord generate_scene(std::uint64_t seed, const GeneratorConfig& config);

/// Capacity of the template under the 30 m spawn-slot spacing; generate_scene
/// rejects configs demanding more vehicles.
int scene_capacity(const GeneratorConfig& config);

}  // namespace otk::synth
