// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "otk/core/lane_graph.hpp"
#include "otk/core/types.hpp"
#include "otk/nn/param_store.hpp"
#include "otk/reid/nets.hpp"

namespace otk::reid {

/// Weighted fusion of per-pair affinities: w*c_map + (1-w)*c_motion.
double fuse_scores(double c_motion, double c_map, double w);

/// Threshold gate: a pair is dropped only when BOTH affinities fall below the
/// association threshold.
inline bool pair_valid(double c_motion, double c_map, double threshold) {
    return !(c_motion < threshold && c_map < threshold);
}

/// Per-pair affinity record.
struct AffinityResult {
    double c_motion = 0.0;
    double c_map = 0.0;
    double c_final = 0.0;
    std::pair<std::string, std::string> pair;  // (history id, future id)
};

/// n histories x N tracklets score matrix with a validity mask. Invalid
/// entries never match (candidate gate, class gate, or both affinities below
/// the association threshold).
struct ScoreMatrix {
    std::vector<std::string> rows;  // history ids
    std::vector<std::string> cols;  // future tracklet ids
    Mat scores;                     // fused
    Mat motion;
    Mat map;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid;

    int n() const { return static_cast<int>(rows.size()); }
    int N() const { return static_cast<int>(cols.size()); }
};

/// Greedy bipartite matching: repeatedly take the globally highest valid
/// score, claim its row and column. Ties break on the lowest (row, col).
std::vector<std::pair<int, int>> greedy_match_indices(const ScoreMatrix& m);
std::vector<std::pair<std::string, std::string>> greedy_match(const ScoreMatrix& m);

struct AssociationParams {
    double tau = 1.5;              // death-memory horizon, seconds
    double threshold = 0.9;        // association threshold on both affinities
    double fusion_w = 0.5;         // weight of the map branch
    double history_horizon = 2.5;  // trailing history window fed to the nets
};

/// Trailing window of a tracklet: observations within `horizon` seconds of
/// its last observation (the distribution the encoders are trained on).
Tracklet truncate_history(const Tracklet& trk, double horizon);

/// Runs both branches over every (history, candidate) pair and assembles the
/// fused, masked score matrix. Histories are rows; all tracklets are columns.
ScoreMatrix build_score_matrix(const std::vector<Tracklet>& histories,
                               const std::vector<Tracklet>& tracklets, const LaneGraph* graph,
                               const MotionNet<float>& motion_net,
                               nn::ParamStore<float>& motion_params, const MapNet<float>& map_net,
                               nn::ParamStore<float>& map_params, const AssociationParams& params);

}  // namespace otk::reid
