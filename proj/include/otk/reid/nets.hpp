// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <vector>

#include "otk/model_config.hpp"
#include "otk/nn/layers.hpp"
#include "otk/reid/inputs.hpp"

namespace otk::reid {

template <class S>
nn::DenseMat<S> cast_mat(const Mat& m) {
    return m.template cast<S>();
}

/// Per-step embedding MLP plus a GRU over the sequence. The UGRU variant
/// shares the same cell, run forward then backward.
template <class S>
struct TrackletEncoder {
    nn::MlpSpec embed;
    nn::GruSpec gru;

    void init(const std::string& prefix, int in_width, int hidden) {
        embed = {prefix + ".embed", {in_width, hidden}, {nn::Act::Relu}};
        gru = {prefix + ".gru", hidden, hidden};
    }

    void register_params(nn::ParamStore<S>& store, Rng& rng) const {
        nn::register_mlp(store, embed, rng);
        nn::register_gru(store, gru, rng);
    }

    /// (outputs TxH, last hidden 1xH)
    std::pair<nn::Var<S>, nn::Var<S>> encode(nn::Binder<S>& p, const Mat& feats,
                                             nn::Var<S> h0) const {
        nn::Var<S> x = p.graph().constant(cast_mat<S>(feats));
        return nn::gru_forward(p, gru, nn::mlp_forward(p, embed, x), h0);
    }

    std::pair<nn::Var<S>, nn::Var<S>> encode_ugru(nn::Binder<S>& p, const Mat& feats,
                                                  nn::Var<S> h_init) const {
        nn::Var<S> x = p.graph().constant(cast_mat<S>(feats));
        return nn::ugru_encode(p, gru, nn::mlp_forward(p, embed, x), h_init);
    }
};

/// Lanelet sub-node aggregation: per-pose MLP, then a 2-layer GRU whose first
/// layer is bidirectional; the second layer's last hidden state is the
/// lanelet node feature.
template <class S>
struct LaneletEncoder {
    nn::MlpSpec pose_mlp;
    nn::GruSpec bigru_fwd, bigru_bwd, top;

    void init(const std::string& prefix, int hidden) {
        pose_mlp = {prefix + ".pose", {LanePose::kWidth, hidden}, {nn::Act::Relu}};
        bigru_fwd = {prefix + ".bif", hidden, hidden};
        bigru_bwd = {prefix + ".bib", hidden, hidden};
        top = {prefix + ".top", 2 * hidden, hidden};
    }

    void register_params(nn::ParamStore<S>& store, Rng& rng) const {
        nn::register_mlp(store, pose_mlp, rng);
        nn::register_gru(store, bigru_fwd, rng);
        nn::register_gru(store, bigru_bwd, rng);
        nn::register_gru(store, top, rng);
    }

    nn::Var<S> embed_poses(nn::Binder<S>& p, const Mat& lane_feats) const {
        return nn::mlp_forward(p, pose_mlp, p.graph().constant(cast_mat<S>(lane_feats)));
    }

    nn::Var<S> aggregate(nn::Binder<S>& p, nn::Var<S> pose_embeds) const {
        nn::Var<S> bi = nn::bigru_forward(p, bigru_fwd, bigru_bwd, pose_embeds);
        auto [outs, last] = nn::gru_forward(p, top, bi, nn::zeros_row(p.graph(), top.hidden));
        (void)outs;
        return last;
    }
};

/// Motion branch: history GRU encoding seeds the future UGRU; concatenated
/// final states decode one affinity score per candidate.
template <class S>
class MotionNet {
public:
    explicit MotionNet(const ModelConfig& cfg = {}) : cfg_(cfg) {
        hist_.init("motion.hist", 8, cfg_.hidden);
        fut_.init("motion.fut", 8, cfg_.hidden);
        decode_ = {"motion.dec", {2 * cfg_.hidden, cfg_.hidden, 1},
                   {nn::Act::Relu, nn::Act::Linear}};
    }

    void register_params(nn::ParamStore<S>& store, Rng& rng) const {
        hist_.register_params(store, rng);
        fut_.register_params(store, rng);
        nn::register_mlp(store, decode_, rng);
    }

    /// Scores for every candidate, shape n x 1, each in (0,1). Empty
    /// candidate lists yield an invalid Var; callers handle n = 0.
    nn::Var<S> forward(nn::Binder<S>& p, const ReidInputs& in) const {
        if (in.futures.empty()) return {};
        auto [h_out, h_last] = hist_.encode(p, in.history, nn::zeros_row(p.graph(), cfg_.hidden));
        (void)h_out;
        std::vector<nn::Var<S>> scores;
        scores.reserve(in.futures.size());
        for (const Mat& fut : in.futures) {
            auto [f_out, f_last] = fut_.encode_ugru(p, fut, h_last);
            (void)f_out;
            nn::Var<S> joint = nn::concat_cols<S>({h_last, f_last});
            scores.push_back(nn::sigmoid(nn::mlp_forward(p, decode_, joint)));
        }
        return nn::concat_rows(scores);
    }

    const ModelConfig& config() const { return cfg_; }

private:
    ModelConfig cfg_;
    TrackletEncoder<S> hist_, fut_;
    nn::MlpSpec decode_;
};

/// Map branch: tracklet encoders as in the motion branch, lane pose MLP,
/// agent-to-lane spatial attention, per-lanelet aggregation, global attention
/// over lanelets, lane-to-agent attention back, then the score decoder.
template <class S>
class MapNet {
public:
    explicit MapNet(const ModelConfig& cfg = {}) : cfg_(cfg) {
        hist_.init("map.hist", 8, cfg_.hidden);
        fut_.init("map.fut", 8, cfg_.hidden);
        lane_.init("map.lane", cfg_.hidden);
        a2l_ = {"map.a2l", cfg_.hidden, cfg_.hidden, cfg_.hidden};
        l2a_ = {"map.l2a", cfg_.hidden, cfg_.hidden, cfg_.hidden};
        global_q_ = "map.glb.wq";
        global_k_ = "map.glb.wk";
        global_v_ = "map.glb.wv";
        decode_ = {"map.dec", {2 * cfg_.hidden, cfg_.hidden, 1}, {nn::Act::Relu, nn::Act::Linear}};
    }

    void register_params(nn::ParamStore<S>& store, Rng& rng) const {
        hist_.register_params(store, rng);
        fut_.register_params(store, rng);
        lane_.register_params(store, rng);
        nn::register_spatial_attention(store, a2l_, rng);
        nn::register_spatial_attention(store, l2a_, rng);
        store.add_uniform(global_q_, cfg_.hidden, cfg_.hidden, cfg_.hidden, rng);
        store.add_uniform(global_k_, cfg_.hidden, cfg_.hidden, cfg_.hidden, rng);
        store.add_uniform(global_v_, cfg_.hidden, cfg_.hidden, cfg_.hidden, rng);
        nn::register_mlp(store, decode_, rng);
    }

    nn::Var<S> forward(nn::Binder<S>& p, const ReidInputs& in, bool* used_map = nullptr) const {
        if (in.futures.empty()) return {};
        nn::Graph<S>& g = p.graph();
        auto [h_out, h_last] = hist_.encode(p, in.history, nn::zeros_row(g, cfg_.hidden));
        (void)h_out;
        std::vector<nn::Var<S>> agent_rows = {h_last};
        std::vector<Vec2> agent_pos = {{0.0, 0.0}};
        for (std::size_t j = 0; j < in.futures.size(); ++j) {
            auto [f_out, f_last] = fut_.encode_ugru(p, in.futures[j], h_last);
            (void)f_out;
            agent_rows.push_back(f_last);
            agent_pos.push_back(in.future_first_pos[j]);
        }
        nn::Var<S> agents = nn::concat_rows(agent_rows);

        if (used_map) *used_map = in.has_lanes;
        if (in.has_lanes) {
            // per-pose embeddings, jointly updated from nearby agents
            std::vector<nn::Var<S>> pose_parts;
            std::vector<Vec2> pose_pos;
            std::vector<long> sizes;
            for (std::size_t k = 0; k < in.lane_feats.size(); ++k) {
                pose_parts.push_back(lane_.embed_poses(p, in.lane_feats[k]));
                sizes.push_back(in.lane_feats[k].rows());
                pose_pos.insert(pose_pos.end(), in.lane_pose_pos[k].begin(),
                                in.lane_pose_pos[k].end());
            }
            nn::Var<S> poses = nn::concat_rows(pose_parts);
            poses = nn::spatial_attention(p, a2l_, poses, pose_pos, agents, agent_pos,
                                          cfg_.attention_radius);
            // lanelet node features
            std::vector<nn::Var<S>> node_rows;
            long off = 0;
            for (std::size_t k = 0; k < sizes.size(); ++k) {
                node_rows.push_back(lane_.aggregate(
                    p, nn::slice_rows(poses, static_cast<int>(off), static_cast<int>(sizes[k]))));
                off += sizes[k];
            }
            nn::Var<S> nodes = nn::concat_rows(node_rows);
            // global propagation across the fully connected lanelet graph
            nn::Var<S> attn = nn::dot_attention(nn::matmul(nodes, p(global_q_)),
                                                nn::matmul(nodes, p(global_k_)),
                                                nn::matmul(nodes, p(global_v_)));
            nodes = nn::add(nodes, attn);
            agents = nn::spatial_attention(p, l2a_, agents, agent_pos, nodes,
                                           in.lanelet_centroid, cfg_.node_radius);
        }

        nn::Var<S> hist_updated = nn::row(agents, 0);
        std::vector<nn::Var<S>> scores;
        for (std::size_t j = 0; j < in.futures.size(); ++j) {
            nn::Var<S> joint =
                nn::concat_cols<S>({hist_updated, nn::row(agents, static_cast<int>(j) + 1)});
            scores.push_back(nn::sigmoid(nn::mlp_forward(p, decode_, joint)));
        }
        return nn::concat_rows(scores);
    }

    const ModelConfig& config() const { return cfg_; }

private:
    ModelConfig cfg_;
    TrackletEncoder<S> hist_, fut_;
    LaneletEncoder<S> lane_;
    nn::SpatialAttnSpec a2l_, l2a_;
    std::string global_q_, global_k_, global_v_;
    nn::MlpSpec decode_;
};

}  // namespace otk::reid
