// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/synth/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otk/common/rng.hpp"
#include "otk/core/geometry.hpp"

namespace otk::synth {
namespace {

int first_index_at_or_after(const Tracklet& trk, double t) {
    for (int i = 0; i < static_cast<int>(trk.obs.size()); ++i)
        if (trk.obs[static_cast<std::size_t>(i)].t >= t - 1e-9) return i;
    return static_cast<int>(trk.obs.size());
}

}  // namespace

bool mask_eligible(const Tracklet& track, double sample_rate, const OcclusionConfig& cfg) {
    const double period = 1.0 / sample_rate;
    return track.duration() > cfg.min_duration_s + 2.0 * period;
}

PseudoOcclusionSample mask_pseudo_occlusion(const SceneRecord& scene, std::uint64_t seed,
                                            const std::string& target_id,
                                            const OcclusionConfig& cfg) {
    const Tracklet* target = scene.find_track(target_id);
    if (!target) throw std::invalid_argument("mask_pseudo_occlusion: unknown track " + target_id);
    const double period = scene.period();
    if (!mask_eligible(*target, scene.sample_rate, cfg))
        throw std::invalid_argument("mask_pseudo_occlusion: track " + target_id + " too short");

    Rng rng(seed);
    const int k_min = static_cast<int>(std::ceil(cfg.min_duration_s / period - 1e-9));
    const int k_cap = static_cast<int>(std::floor(cfg.max_duration_s / period + 1e-9));

    // cut index: the target must retain a visible pose after a minimal gap
    const double t_last = target->end_time();
    std::vector<int> cuts;
    for (int i = 0; i < static_cast<int>(target->obs.size()); ++i)
        if (target->obs[static_cast<std::size_t>(i)].t + k_min * period <= t_last + 1e-9)
            cuts.push_back(i);
    if (cuts.empty()) throw std::invalid_argument("mask_pseudo_occlusion: no valid cut");
    const int cut = cuts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cuts.size()) - 1))];
    const double t_cut = target->obs[static_cast<std::size_t>(cut)].t;

    // history start: any pose within max_history_s of the cut
    int h_lo = cut;
    while (h_lo > 0 && t_cut - target->obs[static_cast<std::size_t>(h_lo - 1)].t <= cfg.max_history_s + 1e-9)
        --h_lo;
    const int h_start = static_cast<int>(rng.uniform_int(h_lo, cut));

    PseudoOcclusionSample sample;
    sample.scene_id = scene.scene_id;
    sample.target_id = target_id;
    sample.sample_rate = scene.sample_rate;
    sample.history.id = target->id;
    sample.history.cls = target->cls;
    sample.history.obs.assign(target->obs.begin() + h_start, target->obs.begin() + cut + 1);

    for (const Tracklet& trk : scene.gt_tracks) {
        if (trk.cls != target->cls) continue;
        const int k_max = std::min(
            k_cap, static_cast<int>(std::floor((trk.end_time() - t_cut) / period + 1e-9)));
        if (k_max < k_min) continue;
        const int k = static_cast<int>(rng.uniform_int(k_min, k_max));
        const double t_visible = t_cut + k * period;
        const int f_start = first_index_at_or_after(trk, t_visible);
        if (f_start >= static_cast<int>(trk.obs.size())) continue;

        // the masked continuation is a new tracklet, not the history itself
        Tracklet future;
        future.id = trk.id + "#f";
        future.cls = trk.cls;
        future.obs.assign(trk.obs.begin() + f_start, trk.obs.end());
        if (trk.id == target_id) {
            sample.gt_match_index = static_cast<int>(sample.future_candidates.size());
            sample.occlusion_duration = future.start_time() - t_cut;
            for (int i = cut + 1; i < f_start; ++i) {
                const Observation& o = trk.obs[static_cast<std::size_t>(i)];
                sample.masked_gt.push_back(o.pose());
                sample.masked_t.push_back(o.t);
            }
        }
        sample.future_candidates.push_back(std::move(future));
    }
    if (sample.gt_match_index < 0)
        throw std::runtime_error("mask_pseudo_occlusion: target lost its future segment");
    return sample;
}

std::vector<PseudoOcclusionSample> build_samples(const SceneRecord& scene, std::uint64_t seed,
                                                 const OcclusionConfig& cfg) {
    std::vector<PseudoOcclusionSample> out;
    for (std::size_t i = 0; i < scene.gt_tracks.size(); ++i) {
        const Tracklet& target = scene.gt_tracks[i];
        if (!mask_eligible(target, scene.sample_rate, cfg)) continue;
        PseudoOcclusionSample sample =
            mask_pseudo_occlusion(scene, Rng::derive(seed, i), target.id, cfg);
        const int n = static_cast<int>(sample.future_candidates.size());
        if (n < cfg.candidates_min) continue;
        if (n > cfg.candidates_max) {
            // deterministic subsample that always keeps the true match
            Rng rng(Rng::derive(seed, i * 7919 + 13));
            std::vector<int> keep;
            for (int j = 0; j < n; ++j)
                if (j != sample.gt_match_index) keep.push_back(j);
            for (std::size_t k = keep.size(); k > 1; --k)
                std::swap(keep[k - 1], keep[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1))]);
            keep.resize(static_cast<std::size_t>(cfg.candidates_max - 1));
            keep.push_back(sample.gt_match_index);
            std::sort(keep.begin(), keep.end());
            std::vector<Tracklet> kept;
            int new_gt = -1;
            for (std::size_t k = 0; k < keep.size(); ++k) {
                if (keep[k] == sample.gt_match_index) new_gt = static_cast<int>(k);
                kept.push_back(std::move(sample.future_candidates[static_cast<std::size_t>(keep[k])]));
            }
            sample.future_candidates = std::move(kept);
            sample.gt_match_index = new_gt;
        }
        out.push_back(std::move(sample));
    }
    return out;
}

PseudoOcclusionSample augment_sample(const PseudoOcclusionSample& sample, std::uint64_t seed,
                                     double rot_range, const AugmentNoise& noise) {
    PseudoOcclusionSample out = sample;
    Rng rng(seed);
    const double phi = rng.uniform(-rot_range, rot_range);
    const Observation& anchor = sample.history.last();
    const Vec2 center(anchor.x, anchor.y);
    const double c = std::cos(phi), s = std::sin(phi);
    auto rotate_obs = [&](Observation& o) {
        const Vec2 d(o.x - center.x(), o.y - center.y());
        o.x = center.x() + c * d.x() - s * d.y();
        o.y = center.y() + s * d.x() + c * d.y();
        o.theta = wrap_angle(o.theta + phi);
        const double vx = o.vx, vy = o.vy;
        o.vx = c * vx - s * vy;
        o.vy = s * vx + c * vy;
    };
    auto jitter_obs = [&](Observation& o) {
        o.x += rng.normal(0.0, noise.sigma_xy);
        o.y += rng.normal(0.0, noise.sigma_xy);
        o.theta = wrap_angle(o.theta + rng.normal(0.0, noise.sigma_theta));
        o.vx += rng.normal(0.0, noise.sigma_v);
        o.vy += rng.normal(0.0, noise.sigma_v);
    };
    for (Observation& o : out.history.obs) rotate_obs(o);
    for (Tracklet& trk : out.future_candidates)
        for (Observation& o : trk.obs) rotate_obs(o);
    for (Pose2D& p : out.masked_gt) {
        const Vec2 d(p.x - center.x(), p.y - center.y());
        p.x = center.x() + c * d.x() - s * d.y();
        p.y = center.y() + s * d.x() + c * d.y();
        p.theta = wrap_angle(p.theta + phi);
    }
    // noise on inputs only, never on the supervision targets
    for (Observation& o : out.history.obs) jitter_obs(o);
    for (Tracklet& trk : out.future_candidates)
        for (Observation& o : trk.obs) jitter_obs(o);
    return out;
}

}  // namespace otk::synth
