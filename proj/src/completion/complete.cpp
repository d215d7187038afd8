// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/completion/complete.hpp"

#include <cmath>
#include <stdexcept>

#include "otk/baselines/baselines.hpp"
#include "otk/core/geometry.hpp"

namespace otk::completion {

CompletedTrack complete_track(const Tracklet& history, const Tracklet& future,
                              const LaneGraph* graph, const CompletionNet<float>* net,
                              nn::ParamStore<float>* params, double rate,
                              const GapPolicy& policy) {
    if (history.empty() || future.empty())
        throw std::invalid_argument("complete_track: empty tracklet");
    const Observation& h_end = history.last();
    const Observation& f_start = future.first();
    if (f_start.t <= h_end.t)
        throw std::invalid_argument("complete_track: future starts before history ends");

    CompletedTrack out;
    out.track_id = history.id;
    const double gap_time = f_start.t - h_end.t;
    const double gap_dist = std::hypot(f_start.x - h_end.x, f_start.y - h_end.y);
    const double dt = 1.0 / rate;
    for (int k = 1; k * dt < gap_time - 1e-9; ++k) out.times.push_back(h_end.t + k * dt);
    if (out.times.empty()) return out;

    const bool model = use_model_path(gap_dist, gap_time, policy) && net != nullptr &&
                       params != nullptr;
    if (!model) {
        out.source = CompletedTrack::Source::Linear;
        out.poses = baselines::linear_interpolate(h_end, f_start, rate);
        return out;
    }

    out.source = CompletedTrack::Source::Model;
    const CompletionInputs in =
        build_completion_inputs(history, future, graph, net->config(), rate);
    nn::Graph<float> g;
    nn::Binder<float> p(g, *params, false);
    const DecodedTrajectory<float> initial = net->decode_initial(p, in);
    const DecodedTrajectory<float> refined = net->refine(p, in, initial);
    const auto& xy = refined.xy.value();
    const auto& th = refined.theta.value();
    for (long i = 0; i < xy.rows(); ++i) {
        const Pose2D local{static_cast<double>(xy(i, 0)), static_cast<double>(xy(i, 1)),
                           wrap_angle(static_cast<double>(th(i, 0)))};
        out.poses.push_back(from_local_frame(local, in.frame));
    }
    if (out.poses.size() != out.times.size())
        throw std::runtime_error("complete_track: query/grid count mismatch");
    return out;
}

}  // namespace otk::completion
