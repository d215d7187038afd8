// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "otk/nn/param_store.hpp"

namespace otk::nn {

struct AdamWConfig {
    double lr = 1e-3;
    double weight_decay = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One decoupled-weight-decay Adam update over every parameter in the store.
/// Parameters without a gradient entry act as zero-gradient (they still decay).
template <class S>
void adamw_step(ParamStore<S>& store, const std::map<std::string, DenseMat<S>>& grads,
                const AdamWConfig& cfg) {
    store.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(store.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(store.step));
    for (auto& [name, e] : store) {
        DenseMat<S> g;
        auto it = grads.find(name);
        if (it != grads.end()) {
            g = it->second;
            if (!g.allFinite())
                throw std::runtime_error("adamw_step: non-finite gradient for parameter " + name);
            if (g.rows() != e.value.rows() || g.cols() != e.value.cols())
                throw std::invalid_argument("adamw_step: gradient shape mismatch for " + name);
        } else {
            g = DenseMat<S>::Zero(e.value.rows(), e.value.cols());
        }
        e.m = static_cast<S>(cfg.beta1) * e.m + static_cast<S>(1.0 - cfg.beta1) * g;
        e.v = (static_cast<S>(cfg.beta2) * e.v.array() +
               static_cast<S>(1.0 - cfg.beta2) * g.array().square())
                  .matrix();
        const auto m_hat = e.m.array() / static_cast<S>(bc1);
        const auto v_hat = e.v.array() / static_cast<S>(bc2);
        e.value.array() -= static_cast<S>(cfg.lr) *
                           (m_hat / (v_hat.sqrt() + static_cast<S>(cfg.eps)) +
                            static_cast<S>(cfg.weight_decay) * e.value.array());
    }
}

/// Stepped learning-rate schedule: lr0 * factor^floor(epoch / every).
inline double decayed_lr(double lr0, double factor, int every, int epoch) {
    return lr0 * std::pow(factor, static_cast<double>(epoch / every));
}

}  // namespace otk::nn
