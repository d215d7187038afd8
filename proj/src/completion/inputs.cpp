// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/completion/inputs.hpp"

#include <cmath>
#include <stdexcept>

#include "otk/reid/inputs.hpp"

namespace otk::completion {

CompletionInputs build_completion_inputs(const Tracklet& history, const Tracklet& future,
                                         const LaneGraph* graph, const ModelConfig& cfg,
                                         double rate, double frame_yaw_offset) {
    if (history.empty() || future.empty())
        throw std::invalid_argument("build_completion_inputs: empty tracklet");
    const Observation& h_end = history.last();
    const Observation& f_start = future.first();
    if (f_start.t <= h_end.t)
        throw std::invalid_argument("build_completion_inputs: future starts before history ends");

    CompletionInputs in;
    in.gap = f_start.t - h_end.t;
    const double bearing = std::atan2(f_start.y - h_end.y, f_start.x - h_end.x);
    in.frame = {0.5 * (h_end.x + f_start.x), 0.5 * (h_end.y + f_start.y),
                wrap_angle(bearing + frame_yaw_offset)};

    in.history = tracklet_features(history, in.frame, h_end.t, false).matrix;
    in.future = tracklet_features(future, in.frame, h_end.t, false).matrix;
    reid::scale_tracklet_features(in.history, cfg);
    reid::scale_tracklet_features(in.future, cfg);

    const auto queries = make_time_queries(in.gap, rate);
    in.queries = Mat(static_cast<long>(queries.size()), 2);
    for (long i = 0; i < in.queries.rows(); ++i) {
        const TimeQuery& q = queries[static_cast<std::size_t>(i)];
        in.queries(i, 0) = q.t / cfg.scale_time;
        in.queries(i, 1) = q.t_norm;
        in.query_t.push_back(q.t);
    }

    if (graph && !graph->empty()) {
        const Pose2D h_local = to_local_frame(h_end.pose(), in.frame);
        const Pose2D f_local = to_local_frame(f_start.pose(), in.frame);
        const LaneGraph local = graph->to_local_frame(in.frame)
                                    .crop({{h_local.x, h_local.y}, {f_local.x, f_local.y}, {0.0, 0.0}},
                                          cfg.crop_radius);
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

}  // namespace otk::completion
