// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/synth/fragment.hpp"

#include <algorithm>
#include <cmath>

#include "otk/common/rng.hpp"

namespace otk::synth {

SceneRecord fragment_scene(const SceneRecord& scene, std::uint64_t seed,
                           const FragmentationConfig& cfg) {
    SceneRecord out;
    out.scene_id = scene.scene_id;
    out.sample_rate = scene.sample_rate;
    out.lane_graph = scene.lane_graph;

    const double period = scene.period();
    Rng rng(seed);
    for (const Tracklet& trk : scene.gt_tracks) {
        // time gap between head end and tail start is (removed + 1) * period
        const int rm_min = std::max(1, static_cast<int>(std::ceil(cfg.min_gap_s / period - 1.0 - 1e-9)));
        const int rm_cap = static_cast<int>(std::floor(cfg.max_gap_s / period - 1.0 + 1e-9));
        const int n = static_cast<int>(trk.obs.size());
        // need >= 2 poses on each side of the removed window
        const int rm_max = std::min(rm_cap, n - 4);
        const bool eligible = rm_max >= rm_min;
        if (!eligible || !rng.bernoulli(cfg.fraction)) {
            out.gt_tracks.push_back(trk);
            out.provenance[trk.id] = trk.id;
            continue;
        }
        const int gap = static_cast<int>(rng.uniform_int(rm_min, rm_max));
        const int cut = static_cast<int>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 3 - gap));
        Tracklet head = trk;
        head.obs.assign(trk.obs.begin(), trk.obs.begin() + cut + 1);
        Tracklet tail = trk;
        tail.id = trk.id + "-b";
        tail.obs.assign(trk.obs.begin() + cut + 1 + gap, trk.obs.end());
        out.provenance[head.id] = trk.id;
        out.provenance[tail.id] = trk.id;
        out.gt_tracks.push_back(std::move(head));
        out.gt_tracks.push_back(std::move(tail));
    }
    return out;
}

}  // namespace otk::synth
