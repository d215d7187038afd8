// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cstdint>

#include "otk/synth/config.hpp"
#include "otk/synth/scene.hpp"

namespace otk::synth {

/// Injects track fragmentation: a fraction of eligible tracks lose an on-grid
/// middle segment of [min_gap_s, max_gap_s]; the tail reappears under a new
/// id. Provenance (fragment id -> source id) is recorded on the output scene.
SceneRecord fragment_scene(const SceneRecord& scene, std::uint64_t seed,
                           const FragmentationConfig& cfg);

}  // namespace otk::synth
