// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/reid/association.hpp"

#include <stdexcept>

#include "otk/core/candidates.hpp"

namespace otk::reid {

double fuse_scores(double c_motion, double c_map, double w) {
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("fuse_scores: w outside [0,1]");
    return w * c_map + (1.0 - w) * c_motion;
}

Tracklet truncate_history(const Tracklet& trk, double horizon) {
    if (trk.empty()) return trk;
    Tracklet out = trk;
    const double cutoff = trk.end_time() - horizon;
    std::size_t first = 0;
    while (first + 1 < trk.obs.size() && trk.obs[first].t < cutoff - 1e-9) ++first;
    out.obs.assign(trk.obs.begin() + static_cast<long>(first), trk.obs.end());
    return out;
}

std::vector<std::pair<int, int>> greedy_match_indices(const ScoreMatrix& m) {
    std::vector<std::pair<int, int>> matches;
    std::vector<bool> row_used(static_cast<std::size_t>(m.n()), false);
    std::vector<bool> col_used(static_cast<std::size_t>(m.N()), false);
    for (;;) {
        int best_r = -1, best_c = -1;
        double best = -1.0;
        for (int r = 0; r < m.n(); ++r) {
            if (row_used[static_cast<std::size_t>(r)]) continue;
            for (int c = 0; c < m.N(); ++c) {
                if (col_used[static_cast<std::size_t>(c)] || !m.valid(r, c)) continue;
                if (m.scores(r, c) > best) {
                    best = m.scores(r, c);
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (best_r < 0) break;
        row_used[static_cast<std::size_t>(best_r)] = true;
        col_used[static_cast<std::size_t>(best_c)] = true;
        matches.push_back({best_r, best_c});
    }
    return matches;
}

std::vector<std::pair<std::string, std::string>> greedy_match(const ScoreMatrix& m) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [r, c] : greedy_match_indices(m))
        out.push_back({m.rows[static_cast<std::size_t>(r)], m.cols[static_cast<std::size_t>(c)]});
    return out;
}

ScoreMatrix build_score_matrix(const std::vector<Tracklet>& histories,
                               const std::vector<Tracklet>& tracklets, const LaneGraph* graph,
                               const MotionNet<float>& motion_net,
                               nn::ParamStore<float>& motion_params, const MapNet<float>& map_net,
                               nn::ParamStore<float>& map_params,
                               const AssociationParams& params) {
    ScoreMatrix m;
    for (const Tracklet& h : histories) m.rows.push_back(h.id);
    for (const Tracklet& t : tracklets) m.cols.push_back(t.id);
    m.scores = Mat::Zero(m.n(), m.N());
    m.motion = Mat::Zero(m.n(), m.N());
    m.map = Mat::Zero(m.n(), m.N());
    m.valid.setConstant(m.n(), m.N(), false);

    for (int r = 0; r < m.n(); ++r) {
        const Tracklet& full_hist = histories[static_cast<std::size_t>(r)];
        std::vector<int> cand;
        for (int c : candidate_filter_indices(full_hist, tracklets, params.tau))
            if (tracklets[static_cast<std::size_t>(c)].cls == full_hist.cls) cand.push_back(c);
        if (cand.empty()) continue;

        const Tracklet hist = truncate_history(full_hist, params.history_horizon);
        std::vector<Tracklet> futs;
        futs.reserve(cand.size());
        for (int c : cand) futs.push_back(tracklets[static_cast<std::size_t>(c)]);
        const ReidInputs in = build_reid_inputs(hist, futs, graph, motion_net.config());

        nn::Graph<float> g_m;
        nn::Binder<float> bm(g_m, motion_params, false);
        const auto motion_scores = motion_net.forward(bm, in).value();
        nn::Graph<float> g_p;
        nn::Binder<float> bp(g_p, map_params, false);
        const auto map_scores = map_net.forward(bp, in).value();

        for (std::size_t k = 0; k < cand.size(); ++k) {
            const int c = cand[k];
            const double cm = static_cast<double>(motion_scores(static_cast<long>(k), 0));
            const double cp = static_cast<double>(map_scores(static_cast<long>(k), 0));
            m.motion(r, c) = cm;
            m.map(r, c) = cp;
            m.scores(r, c) = fuse_scores(cm, cp, params.fusion_w);
            m.valid(r, c) = pair_valid(cm, cp, params.threshold);
        }
    }
    return m;
}

}  // namespace otk::reid
