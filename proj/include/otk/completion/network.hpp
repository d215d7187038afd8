// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <vector>

#include "otk/completion/inputs.hpp"
#include "otk/reid/nets.hpp"

namespace otk::completion {

/// Decoded trajectory heads as graph nodes: coordinates (k x 2, meters in the
/// local frame), yaw (k x 1), and the per-query trunk features feeding the
/// refinement stage.
template <class S>
struct DecodedTrajectory {
    nn::Var<S> xy;
    nn::Var<S> theta;
    nn::Var<S> trunk;  // k x H
};

/// Track completion network. Two parallel motion encoders exchange final
/// hidden states through their UGRUs; MLP-encoded time queries cross-attend
/// to the motion encodings and regress the initial trajectory; the refinement
/// stage fuses lane features (lane-to-agent attention), self-attention with a
/// skip connection, a bidirectional GRU, and a delta decode on top of the
/// initial poses.
template <class S>
class CompletionNet {
public:
    explicit CompletionNet(const ModelConfig& cfg = {}) : cfg_(cfg) {
        const int H = cfg_.hidden;
        hist_embed_ = {"cmp.hist.embed", {6, H}, {nn::Act::Relu}};
        fut_embed_ = {"cmp.fut.embed", {6, H}, {nn::Act::Relu}};
        hist_gru_ = {"cmp.hist.gru", H, H};
        fut_gru_ = {"cmp.fut.gru", H, H};
        hist_ugru_ = {"cmp.hist.ugru", H, H};
        fut_ugru_ = {"cmp.fut.ugru", H, H};
        query_mlp_ = {"cmp.query", {2, H}, {nn::Act::Relu}};
        cross_q_ = "cmp.cross.wq";
        cross_k_ = "cmp.cross.wk";
        cross_v_ = "cmp.cross.wv";
        trunk_ = {"cmp.trunk", {4 * H, H}, {nn::Act::Relu}};
        coord_head_ = {"cmp.head.xy", {H, H, 2}, {nn::Act::Relu, nn::Act::Linear}};
        yaw_head_ = {"cmp.head.yaw", {H, H, 1}, {nn::Act::Relu, nn::Act::Linear}};

        lane_.init("cmp.lane", H);
        point_mlp_ = {"cmp.point", {5, H}, {nn::Act::Relu}};
        point_proj_ = {"cmp.pproj", {2 * H, H}, {nn::Act::Relu}};
        l2a_ = {"cmp.l2a", H, H, H};
        self_q_ = "cmp.self.wq";
        self_k_ = "cmp.self.wk";
        self_v_ = "cmp.self.wv";
        smooth_fwd_ = {"cmp.smooth.f", H, H};
        smooth_bwd_ = {"cmp.smooth.b", H, H};
        refine_head_ = {"cmp.head.ref", {2 * H, H, 3}, {nn::Act::Relu, nn::Act::Linear}};
    }

    void register_params(nn::ParamStore<S>& store, Rng& rng) const {
        const int H = cfg_.hidden;
        for (const nn::MlpSpec* m : {&hist_embed_, &fut_embed_, &query_mlp_, &trunk_, &coord_head_,
                                     &yaw_head_, &point_mlp_, &point_proj_, &refine_head_})
            nn::register_mlp(store, *m, rng);
        for (const nn::GruSpec* g :
             {&hist_gru_, &fut_gru_, &hist_ugru_, &fut_ugru_, &smooth_fwd_, &smooth_bwd_})
            nn::register_gru(store, *g, rng);
        lane_.register_params(store, rng);
        nn::register_spatial_attention(store, l2a_, rng);
        for (const std::string* n : {&cross_q_, &cross_k_, &cross_v_, &self_q_, &self_k_, &self_v_})
            store.add_uniform(*n, H, H, H, rng);
    }

    /// Initial trajectory decode. Queries may be empty (k = 0): callers handle
    /// that before invoking.
    DecodedTrajectory<S> decode_initial(nn::Binder<S>& p, const CompletionInputs& in) const {
        nn::Graph<S>& g = p.graph();
        const int H = cfg_.hidden;
        nn::Var<S> hx = nn::mlp_forward(p, hist_embed_, g.constant(reid::cast_mat<S>(in.history)));
        nn::Var<S> fx = nn::mlp_forward(p, fut_embed_, g.constant(reid::cast_mat<S>(in.future)));
        auto [h_seq0, h_final0] = nn::gru_forward(p, hist_gru_, hx, nn::zeros_row(g, H));
        auto [f_seq0, f_final0] = nn::gru_forward(p, fut_gru_, fx, nn::zeros_row(g, H));
        (void)h_seq0;
        (void)f_seq0;
        // each UGRU is seeded by the other side's encoding
        auto [h_seq, h_final] = nn::ugru_encode(p, hist_ugru_, hx, f_final0);
        auto [f_seq, f_final] = nn::ugru_encode(p, fut_ugru_, fx, h_final0);

        nn::Var<S> queries = nn::mlp_forward(p, query_mlp_, g.constant(reid::cast_mat<S>(in.queries)));
        nn::Var<S> memory = nn::concat_rows<S>({h_seq, f_seq});
        nn::Var<S> attn = nn::dot_attention(nn::matmul(queries, p(cross_q_)),
                                            nn::matmul(memory, p(cross_k_)),
                                            nn::matmul(memory, p(cross_v_)));
        const int k = static_cast<int>(in.queries.rows());
        std::vector<nn::Var<S>> rows;
        rows.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            // skip connection: attention output concatenated with the motion
            // encodings and the query features
            rows.push_back(nn::concat_cols<S>(
                {nn::row(attn, i), nn::row(queries, i), h_final, f_final}));
        }
        nn::Var<S> trunk = nn::mlp_forward(p, trunk_, nn::concat_rows(rows));
        DecodedTrajectory<S> out;
        out.trunk = trunk;
        out.xy = nn::scale(nn::mlp_forward(p, coord_head_, trunk), static_cast<S>(cfg_.scale_pos));
        out.theta = nn::mlp_forward(p, yaw_head_, trunk);
        return out;
    }

    /// Lane-aware refinement; returns refined (xy, theta). With no lanes the
    /// initial trajectory passes through unchanged and `used_map` is false.
    DecodedTrajectory<S> refine(nn::Binder<S>& p, const CompletionInputs& in,
                                const DecodedTrajectory<S>& initial,
                                bool* used_map = nullptr) const {
        if (used_map) *used_map = in.has_lanes;
        if (!in.has_lanes) return initial;
        nn::Graph<S>& g = p.graph();
        const int k = static_cast<int>(initial.xy.rows());

        // per-point features from the initial decode (differentiable; only the
        // radius gate below reads the raw values)
        const auto& xy = initial.xy.value();
        Mat t_norm(k, 1);
        std::vector<Vec2> point_pos;
        for (int i = 0; i < k; ++i) {
            t_norm(i, 0) = in.query_t[static_cast<std::size_t>(i)] / in.gap;
            point_pos.push_back({static_cast<double>(xy(i, 0)), static_cast<double>(xy(i, 1))});
        }
        nn::Var<S> point_raw = nn::concat_cols<S>(
            {nn::scale(initial.xy, static_cast<S>(1.0 / cfg_.scale_pos)),
             nn::cos_f(initial.theta), nn::sin_f(initial.theta),
             g.constant(reid::cast_mat<S>(t_norm))});
        nn::Var<S> pts = nn::mlp_forward(p, point_mlp_, point_raw);
        pts = nn::mlp_forward(p, point_proj_, nn::concat_cols<S>({pts, initial.trunk}));

        std::vector<nn::Var<S>> node_rows;
        for (std::size_t i = 0; i < in.lane_feats.size(); ++i)
            node_rows.push_back(lane_.aggregate(p, lane_.embed_poses(p, in.lane_feats[i])));
        nn::Var<S> nodes = nn::concat_rows(node_rows);
        pts = nn::spatial_attention(p, l2a_, pts, point_pos, nodes, in.lanelet_centroid,
                                    cfg_.node_radius);
        // self-attention with skip connection across the track
        nn::Var<S> self = nn::dot_attention(nn::matmul(pts, p(self_q_)),
                                            nn::matmul(pts, p(self_k_)),
                                            nn::matmul(pts, p(self_v_)));
        pts = nn::add(pts, self);
        nn::Var<S> smoothed = nn::bigru_forward(p, smooth_fwd_, smooth_bwd_, pts);
        nn::Var<S> delta = nn::mlp_forward(p, refine_head_, smoothed);

        DecodedTrajectory<S> out;
        out.trunk = smoothed;
        out.xy = nn::add(initial.xy,
                         nn::scale(nn::slice_cols(delta, 0, 2), static_cast<S>(cfg_.scale_pos)));
        out.theta = nn::add(initial.theta, nn::slice_cols(delta, 2, 1));
        return out;
    }

    const ModelConfig& config() const { return cfg_; }

private:
    ModelConfig cfg_;
    nn::MlpSpec hist_embed_, fut_embed_, query_mlp_, trunk_, coord_head_, yaw_head_;
    nn::GruSpec hist_gru_, fut_gru_, hist_ugru_, fut_ugru_;
    std::string cross_q_, cross_k_, cross_v_;
    reid::LaneletEncoder<S> lane_;
    nn::MlpSpec point_mlp_, point_proj_;
    nn::SpatialAttnSpec l2a_;
    std::string self_q_, self_k_, self_v_;
    nn::GruSpec smooth_fwd_, smooth_bwd_;
    nn::MlpSpec refine_head_;
};

}  // namespace otk::completion
