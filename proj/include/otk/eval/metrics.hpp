// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "otk/core/types.hpp"

namespace otk::eval {

/// Exact-match fraction over chosen candidate indices; an empty prediction
/// counts as wrong.
double association_accuracy(const std::vector<std::optional<int>>& predictions,
                            const std::vector<int>& gt_indices);

/// Mean Euclidean displacement over all timestamps of all aligned pairs.
double ade(const std::vector<std::vector<Pose2D>>& pred,
           const std::vector<std::vector<Pose2D>>& gt);

/// Mean |wrapped yaw difference| in degrees.
double yaw_error_deg(const std::vector<std::vector<Pose2D>>& pred,
                     const std::vector<std::vector<Pose2D>>& gt);

/// Fraction of trajectories whose maximum pointwise displacement exceeds
/// `threshold` meters.
double miss_rate(const std::vector<std::vector<Pose2D>>& pred,
                 const std::vector<std::vector<Pose2D>>& gt, double threshold = 2.0);

struct TrackingQuality {
    int ids = 0;
    int matched_gt_boxes = 0;
    int total_gt_boxes = 0;
    double recall = 0.0;
};

/// Per-frame greedy center-distance matching within `match_radius`; IDS is
/// counted whenever a GT track's matched predicted id changes between
/// consecutive matched frames.
TrackingQuality ids_and_recall(const std::vector<Tracklet>& pred_tracks,
                               const std::vector<Tracklet>& gt_tracks, double match_radius = 2.0);

struct EvalReport {
    std::optional<double> association_accuracy;  // absent without provenance
    double ade = 0.0;
    double yaw_error_deg = 0.0;
    double miss_rate = 0.0;
    int ids = 0;
    double recall = 0.0;
    int n_samples = 0;            // scenes evaluated
    int n_association = 0;        // merge events checked
    int n_recovered_segments = 0;
    int n_gt_boxes = 0;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

}  // namespace otk::eval
