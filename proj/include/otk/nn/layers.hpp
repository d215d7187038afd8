// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <vector>

#include "otk/core/types.hpp"
#include "otk/nn/ops.hpp"
#include "otk/nn/param_store.hpp"

namespace otk::nn {

enum class Act { Linear, Relu, Tanh, Sigmoid };

template <class S>
Var<S> activate(Var<S> x, Act act) {
    switch (act) {
        case Act::Linear: return x;
        case Act::Relu: return relu(x);
        case Act::Tanh: return tanh_f(x);
        case Act::Sigmoid: return sigmoid(x);
    }
    return x;
}

/// Plain MLP applied row-wise: dims = [in, h1, ..., out], one activation per
/// affine layer. Parameters are `<prefix>.w<k>` / `<prefix>.b<k>`.
struct MlpSpec {
    std::string prefix;
    std::vector<int> dims;
    std::vector<Act> acts;

    int layers() const { return static_cast<int>(dims.size()) - 1; }
    std::string w(int k) const { return prefix + ".w" + std::to_string(k); }
    std::string b(int k) const { return prefix + ".b" + std::to_string(k); }
};

template <class S>
void register_mlp(ParamStore<S>& store, const MlpSpec& spec, Rng& rng) {
    for (int k = 0; k < spec.layers(); ++k) {
        store.add_uniform(spec.w(k), spec.dims[k], spec.dims[k + 1], spec.dims[k], rng);
        store.add_uniform(spec.b(k), 1, spec.dims[k + 1], spec.dims[k], rng);
    }
}

template <class S>
Var<S> mlp_forward(Binder<S>& p, const MlpSpec& spec, Var<S> x) {
    if (static_cast<int>(spec.acts.size()) != spec.layers())
        throw std::invalid_argument("mlp_forward: one activation per layer required");
    if (x.cols() != spec.dims.front())
        throw std::invalid_argument("mlp_forward: input width " + std::to_string(x.cols()) +
                                    " vs expected " + std::to_string(spec.dims.front()));
    Var<S> h = x;
    for (int k = 0; k < spec.layers(); ++k)
        h = activate(add_rowvec(matmul(h, p(spec.w(k))), p(spec.b(k))), spec.acts[k]);
    return h;
}

/// GRU cell/sequence. Gates follow h_t = (1 - z_t) * n_t + z_t * h_{t-1} with
/// n_t = tanh(x W_n + (r_t . h_{t-1}) U_n + b_n). Parameters:
/// `<prefix>.{wz,uz,bz,wr,ur,br,wn,un,bn}`.
struct GruSpec {
    std::string prefix;
    int in = 0;
    int hidden = 0;

    std::string name(const char* part) const { return prefix + "." + part; }
};

template <class S>
void register_gru(ParamStore<S>& store, const GruSpec& spec, Rng& rng) {
    const int D = spec.in, H = spec.hidden;
    for (const char* gate : {"wz", "wr", "wn"}) store.add_uniform(spec.name(gate), D, H, D, rng);
    for (const char* gate : {"uz", "ur", "un"}) store.add_uniform(spec.name(gate), H, H, H, rng);
    for (const char* gate : {"bz", "br", "bn"}) store.add_uniform(spec.name(gate), 1, H, H, rng);
}

template <class S>
Var<S> gru_cell(Binder<S>& p, const GruSpec& spec, Var<S> x, Var<S> h) {
    Var<S> z = sigmoid(add_rowvec(add(matmul(x, p(spec.name("wz"))), matmul(h, p(spec.name("uz")))),
                                  p(spec.name("bz"))));
    Var<S> r = sigmoid(add_rowvec(add(matmul(x, p(spec.name("wr"))), matmul(h, p(spec.name("ur")))),
                                  p(spec.name("br"))));
    Var<S> n = tanh_f(add_rowvec(
        add(matmul(x, p(spec.name("wn"))), matmul(cmul(r, h), p(spec.name("un")))),
        p(spec.name("bn"))));
    // h' = (1-z).n + z.h
    Var<S> one_minus_z = affine(z, S(-1), S(1));
    return add(cmul(one_minus_z, n), cmul(z, h));
}

template <class S>
Var<S> zeros_row(Graph<S>& g, int h) {
    return g.constant(DenseMat<S>::Zero(1, h));
}

/// Runs the cell over a TxD sequence; returns (outputs TxH, last hidden 1xH).
template <class S>
std::pair<Var<S>, Var<S>> gru_forward(Binder<S>& p, const GruSpec& spec, Var<S> seq, Var<S> h0) {
    if (seq.rows() < 1) throw std::invalid_argument("gru_forward: empty sequence");
    if (seq.cols() != spec.in || h0.cols() != spec.hidden || h0.rows() != 1)
        throw std::invalid_argument("gru_forward: shape mismatch (seq " +
                                    detail::shape_str(seq.rows(), seq.cols()) + ", h0 " +
                                    detail::shape_str(h0.rows(), h0.cols()) + ")");
    Var<S> h = h0;
    std::vector<Var<S>> outs;
    outs.reserve(static_cast<std::size_t>(seq.rows()));
    for (int t = 0; t < seq.rows(); ++t) {
        h = gru_cell(p, spec, row(seq, t), h);
        outs.push_back(h);
    }
    return {concat_rows(outs), h};
}

/// UGRU: one shared cell run forward from h_init, then backward over the
/// reversed sequence starting from the forward pass's final state. Output row
/// t is the backward state produced at step t; the final state is the
/// backward pass's last hidden state.
template <class S>
std::pair<Var<S>, Var<S>> ugru_encode(Binder<S>& p, const GruSpec& spec, Var<S> seq, Var<S> h_init) {
    auto [fwd_out, fwd_last] = gru_forward(p, spec, seq, h_init);
    (void)fwd_out;
    Var<S> h = fwd_last;
    std::vector<Var<S>> outs(static_cast<std::size_t>(seq.rows()));
    for (int t = seq.rows() - 1; t >= 0; --t) {
        h = gru_cell(p, spec, row(seq, t), h);
        outs[static_cast<std::size_t>(t)] = h;
    }
    return {concat_rows(outs), h};
}

/// Bidirectional GRU layer: independent forward/backward cells, per-step
/// outputs concatenated to Tx2H.
template <class S>
Var<S> bigru_forward(Binder<S>& p, const GruSpec& fwd, const GruSpec& bwd, Var<S> seq) {
    Graph<S>& g = *seq.g;
    auto [f_out, f_last] = gru_forward(p, fwd, seq, zeros_row(g, fwd.hidden));
    (void)f_last;
    Var<S> h = zeros_row(g, bwd.hidden);
    std::vector<Var<S>> b_rows(static_cast<std::size_t>(seq.rows()));
    for (int t = seq.rows() - 1; t >= 0; --t) {
        h = gru_cell(p, bwd, row(seq, t), h);
        b_rows[static_cast<std::size_t>(t)] = h;
    }
    return concat_cols<S>({f_out, concat_rows(b_rows)});
}

/// Scaled dot-product attention with optional key mask shared across queries.
/// Fully masked queries yield zero rows, reported via `empty_rows`.
template <class S>
Var<S> dot_attention(Var<S> Q, Var<S> K, Var<S> V, const std::vector<bool>* key_mask = nullptr,
                     std::vector<bool>* empty_rows = nullptr) {
    if (Q.cols() != K.cols()) detail::shape_error("dot_attention", Q, K);
    if (K.rows() != V.rows()) detail::shape_error("dot_attention", K, V);
    const S inv_sqrt_d = S(1) / std::sqrt(static_cast<S>(Q.cols()));
    Var<S> scores = scale(matmul(Q, transpose(K)), inv_sqrt_d);
    BoolMat mask;
    const BoolMat* mp = nullptr;
    if (key_mask) {
        if (static_cast<long>(key_mask->size()) != K.rows())
            throw std::invalid_argument("dot_attention: mask length mismatch");
        mask.resize(Q.rows(), K.rows());
        for (long i = 0; i < mask.rows(); ++i)
            for (long j = 0; j < mask.cols(); ++j)
                mask(i, j) = (*key_mask)[static_cast<std::size_t>(j)];
        mp = &mask;
    }
    Var<S> w = softmax_rows(scores, mp, empty_rows);
    return matmul(w, V);
}

/// Radius-gated attention used for agent<->lane message passing. Each
/// destination row attends to source rows strictly within `radius`; rows with
/// no in-radius source pass through unchanged. Output = dst + softmax(qK/√d)V.
struct SpatialAttnSpec {
    std::string prefix;
    int dst_dim = 0;
    int src_dim = 0;
    int attn_dim = 0;

    std::string wq() const { return prefix + ".wq"; }
    std::string wk() const { return prefix + ".wk"; }
    std::string wv() const { return prefix + ".wv"; }
};

template <class S>
void register_spatial_attention(ParamStore<S>& store, const SpatialAttnSpec& spec, Rng& rng) {
    store.add_uniform(spec.wq(), spec.dst_dim, spec.attn_dim, spec.dst_dim, rng);
    store.add_uniform(spec.wk(), spec.src_dim, spec.attn_dim, spec.src_dim, rng);
    store.add_uniform(spec.wv(), spec.src_dim, spec.dst_dim, spec.src_dim, rng);
}

inline BoolMat radius_mask(const std::vector<Vec2>& dst_pos, const std::vector<Vec2>& src_pos,
                           double radius) {
    BoolMat mask(static_cast<long>(dst_pos.size()), static_cast<long>(src_pos.size()));
    for (long i = 0; i < mask.rows(); ++i)
        for (long j = 0; j < mask.cols(); ++j)
            mask(i, j) = (dst_pos[static_cast<std::size_t>(i)] -
                          src_pos[static_cast<std::size_t>(j)])
                             .norm() < radius;
    return mask;
}

template <class S>
Var<S> spatial_attention(Binder<S>& p, const SpatialAttnSpec& spec, Var<S> dst_feats,
                         const std::vector<Vec2>& dst_pos, Var<S> src_feats,
                         const std::vector<Vec2>& src_pos, double radius) {
    if (dst_feats.rows() != static_cast<long>(dst_pos.size()) ||
        src_feats.rows() != static_cast<long>(src_pos.size()))
        throw std::invalid_argument("spatial_attention: positions/features count mismatch");
    if (src_feats.rows() == 0) return dst_feats;
    const BoolMat mask = radius_mask(dst_pos, src_pos, radius);
    Var<S> q = matmul(dst_feats, p(spec.wq()));
    Var<S> k = matmul(src_feats, p(spec.wk()));
    Var<S> v = matmul(src_feats, p(spec.wv()));
    const S inv_sqrt_d = S(1) / std::sqrt(static_cast<S>(spec.attn_dim));
    Var<S> scores = scale(matmul(q, transpose(k)), inv_sqrt_d);
    Var<S> w = softmax_rows(scores, &mask);  // empty rows -> zero weights -> passthrough
    return add(dst_feats, matmul(w, v));
}

}  // namespace otk::nn
