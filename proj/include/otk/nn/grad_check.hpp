// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "otk/common/rng.hpp"
#include "otk/nn/param_store.hpp"

namespace otk::nn {

struct GradCheckReport {
    double max_rel_err = 0.0;
    int checked = 0;
    std::string worst;  // "name(r,c)" of the worst element

    bool passes(double tol) const { return checked > 0 && max_rel_err < tol; }
};

inline double rel_err(double analytic, double numeric) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-3});
    return std::abs(analytic - numeric) / denom;
}

inline constexpr double kFdStep = 1e-5;

/// Checks d f / d x against central finite differences at step 1e-5.
/// F: (Graph<S>&, Var<S> x) -> Var<S> scalar. Run with S = double.
template <class S, class F>
GradCheckReport grad_check(F&& f, const DenseMat<S>& x0, double h = kFdStep) {
    GradCheckReport rep;
    DenseMat<S> analytic;
    {
        Graph<S> g;
        Var<S> x = g.leaf(x0, true);
        Var<S> y = f(g, x);
        g.backward(y);
        analytic = g.has_grad(x.id) ? g.grad(x.id) : DenseMat<S>::Zero(x0.rows(), x0.cols());
    }
    auto eval = [&](const DenseMat<S>& xv) {
        Graph<S> g;
        Var<S> x = g.leaf(xv, false);
        return static_cast<double>(f(g, x).value()(0, 0));
    };
    DenseMat<S> xp = x0;
    for (long r = 0; r < x0.rows(); ++r) {
        for (long c = 0; c < x0.cols(); ++c) {
            const S keep = xp(r, c);
            xp(r, c) = keep + static_cast<S>(h);
            const double up = eval(xp);
            xp(r, c) = keep - static_cast<S>(h);
            const double dn = eval(xp);
            xp(r, c) = keep;
            const double numeric = (up - dn) / (2.0 * h);
            const double e = rel_err(static_cast<double>(analytic(r, c)), numeric);
            if (e > rep.max_rel_err) {
                rep.max_rel_err = e;
                rep.worst = "x(" + std::to_string(r) + "," + std::to_string(c) + ")";
            }
            ++rep.checked;
        }
    }
    return rep;
}

/// Checks d loss / d params for every (or a seeded random subset of) parameter
/// element in the store. LossFn: (Binder<S>&) -> Var<S> scalar; it must build
/// the same computation for repeated calls.
template <class S, class LossFn>
GradCheckReport grad_check_params(LossFn&& loss_fn, ParamStore<S>& store, int max_elems = 0,
                                  std::uint64_t seed = 0, double h = kFdStep) {
    GradCheckReport rep;
    std::map<std::string, DenseMat<S>> analytic;
    {
        Graph<S> g;
        Binder<S> binder(g, store, true);
        Var<S> loss = loss_fn(binder);
        g.backward(loss);
        analytic = binder.grads();
    }
    auto eval = [&]() {
        Graph<S> g;
        Binder<S> binder(g, store, false);
        return static_cast<double>(loss_fn(binder).value()(0, 0));
    };

    struct Elem {
        std::string name;
        long r, c;
        double a;
    };
    std::vector<Elem> elems;
    for (const auto& [name, grad] : analytic)
        for (long r = 0; r < grad.rows(); ++r)
            for (long c = 0; c < grad.cols(); ++c)
                elems.push_back({name, r, c, static_cast<double>(grad(r, c))});
    if (max_elems > 0 && static_cast<int>(elems.size()) > max_elems) {
        // deterministic subset: Fisher-Yates prefix
        Rng rng(seed);
        for (int i = 0; i < max_elems; ++i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(i, static_cast<std::int64_t>(elems.size()) - 1));
            std::swap(elems[static_cast<std::size_t>(i)], elems[j]);
        }
        elems.resize(static_cast<std::size_t>(max_elems));
    }

    for (const Elem& e : elems) {
        S& slot = store.value(e.name)(e.r, e.c);
        const S keep = slot;
        slot = keep + static_cast<S>(h);
        const double up = eval();
        slot = keep - static_cast<S>(h);
        const double dn = eval();
        slot = keep;
        const double numeric = (up - dn) / (2.0 * h);
        const double err = rel_err(e.a, numeric);
        if (err > rep.max_rel_err) {
            rep.max_rel_err = err;
            rep.worst = e.name + "(" + std::to_string(e.r) + "," + std::to_string(e.c) + ")";
        }
        ++rep.checked;
    }
    return rep;
}

}  // namespace otk::nn
