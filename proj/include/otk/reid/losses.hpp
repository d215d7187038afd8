// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "otk/nn/ops.hpp"

namespace otk::reid {

/// Binary focal loss over per-candidate scores (n x 1, probabilities).
/// L_i = -alpha_t (1 - k_t)^gamma log(k_t), k_t = k if y=1 else 1-k, with
/// alpha_t = alpha for positives and 1-alpha for negatives. Returns the mean.
/// Scores are squashed affinely into [eps, 1-eps] to keep log finite; the
/// squash is exact at 0.5.
template <class S>
nn::Var<S> focal_loss(nn::Var<S> scores, const std::vector<int>& labels, S alpha, S gamma,
                      S eps = S(1e-6)) {
    if (scores.rows() != static_cast<long>(labels.size()) || scores.cols() != 1)
        throw std::invalid_argument("focal_loss: scores/labels mismatch");
    bool any_pos = false;
    for (int y : labels) any_pos = any_pos || (y == 1);
    if (!any_pos) throw std::invalid_argument("focal_loss: batch has no positive label");

    nn::Var<S> k = nn::affine(scores, S(1) - S(2) * eps, eps);
    std::vector<nn::Var<S>> terms;
    terms.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        nn::Var<S> ki = nn::slice_rows(k, static_cast<int>(i), 1);
        nn::Var<S> kt = labels[i] == 1 ? ki : nn::affine(ki, S(-1), S(1));
        const S at = labels[i] == 1 ? alpha : S(1) - alpha;
        nn::Var<S> one_minus = nn::affine(kt, S(-1), S(1));
        nn::Var<S> term = nn::scale(nn::cmul(nn::pow_f(one_minus, gamma), nn::log_f(kt)), -at);
        terms.push_back(term);
    }
    return nn::mean(nn::concat_rows(terms));
}

/// Scalar reference of the same formula (for oracles and reports).
inline double focal_loss_value(double k, int y, double alpha = 0.5, double gamma = 2.0) {
    const double kt = y == 1 ? k : 1.0 - k;
    const double at = y == 1 ? alpha : 1.0 - alpha;
    return -at * std::pow(1.0 - kt, gamma) * std::log(kt);
}

}  // namespace otk::reid
