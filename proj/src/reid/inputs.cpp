// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/reid/inputs.hpp"

#include "otk/core/geometry.hpp"

namespace otk::reid {

void scale_tracklet_features(Mat& feats, const ModelConfig& cfg) {
    feats.col(0) /= cfg.scale_pos;
    feats.col(1) /= cfg.scale_pos;
    feats.col(3) /= cfg.scale_time;
    if (feats.cols() >= 8) {
        feats.col(6) /= cfg.scale_vel;
        feats.col(7) /= cfg.scale_vel;
    }
}

ReidInputs build_reid_inputs(const Tracklet& history, const std::vector<Tracklet>& futures,
                             const LaneGraph* graph, const ModelConfig& cfg,
                             double frame_yaw_offset) {
    const Observation& anchor = history.last();
    const Pose2D origin{anchor.x, anchor.y, wrap_angle(anchor.theta + frame_yaw_offset)};
    const double t0 = anchor.t;

    ReidInputs in;
    in.history = tracklet_features(history, origin, t0, true).matrix;
    scale_tracklet_features(in.history, cfg);

    for (const Tracklet& fut : futures) {
        Mat f = tracklet_features(fut, origin, t0, true).matrix;
        in.future_first_pos.push_back({f(0, 0) * 1.0, f(0, 1) * 1.0});
        scale_tracklet_features(f, cfg);
        in.futures.push_back(std::move(f));
    }

    if (graph && !graph->empty()) {
        std::vector<Vec2> anchors = {{0.0, 0.0}};
        for (const Vec2& p : in.future_first_pos) anchors.push_back(p);
        const LaneGraph local = graph->to_local_frame(origin).crop(anchors, cfg.crop_radius);
        for (const Lanelet& ll : local.lanelets) {
            Mat feats(static_cast<long>(ll.poses.size()), LanePose::kWidth);
            std::vector<Vec2> pos;
            for (long i = 0; i < feats.rows(); ++i) {
                const LanePose& p = ll.poses[static_cast<std::size_t>(i)];
                feats(i, 0) = p.x / cfg.scale_pos;
                feats(i, 1) = p.y / cfg.scale_pos;
                feats(i, 2) = p.theta;
                feats(i, 3) = std::cos(p.theta);
                feats(i, 4) = std::sin(p.theta);
                feats(i, 5) = p.end_flag;
                feats(i, 6) = p.on_stop_line;
                feats(i, 7) = p.on_crosswalk;
                pos.push_back({p.x, p.y});
            }
            in.lane_feats.push_back(std::move(feats));
            in.lane_pose_pos.push_back(std::move(pos));
            in.lanelet_centroid.push_back(ll.centroid());
        }
        in.has_lanes = !in.lane_feats.empty();
    }
    return in;
}

}  // namespace otk::reid
