// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "otk/nn/graph.hpp"

namespace otk::nn {

using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {
inline std::string shape_str(long r, long c) {
    return std::to_string(r) + "x" + std::to_string(c);
}
template <class S>
[[noreturn]] void shape_error(const char* op, const Var<S>& a, const Var<S>& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                shape_str(a.rows(), a.cols()) + " vs " +
                                shape_str(b.rows(), b.cols()));
}
}  // namespace detail

template <class S>
Var<S> matmul(Var<S> a, Var<S> b) {
    if (a.cols() != b.rows()) detail::shape_error("matmul", a, b);
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value() * b.value();
    const bool ng = g.needs_grad(a.id) || g.needs_grad(b.id);
    if (!ng) return g.push(std::move(v), false, nullptr);
    int ia = a.id, ib = b.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, ib, self](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        if (gr.needs_grad(ia)) gr.grad(ia).noalias() += go * gr.value(ib).transpose();
        if (gr.needs_grad(ib)) gr.grad(ib).noalias() += gr.value(ia).transpose() * go;
    });
}

template <class S>
Var<S> add(Var<S> a, Var<S> b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) detail::shape_error("add", a, b);
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value() + b.value();
    const bool ng = g.needs_grad(a.id) || g.needs_grad(b.id);
    if (!ng) return g.push(std::move(v), false, nullptr);
    int ia = a.id, ib = b.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, ib, self](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        if (gr.needs_grad(ia)) gr.grad(ia) += go;
        if (gr.needs_grad(ib)) gr.grad(ib) += go;
    });
}

template <class S>
Var<S> sub(Var<S> a, Var<S> b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) detail::shape_error("sub", a, b);
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value() - b.value();
    const bool ng = g.needs_grad(a.id) || g.needs_grad(b.id);
    if (!ng) return g.push(std::move(v), false, nullptr);
    int ia = a.id, ib = b.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, ib, self](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        if (gr.needs_grad(ia)) gr.grad(ia) += go;
        if (gr.needs_grad(ib)) gr.grad(ib) -= go;
    });
}

/// Elementwise product.
template <class S>
Var<S> cmul(Var<S> a, Var<S> b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) detail::shape_error("cmul", a, b);
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().cwiseProduct(b.value());
    const bool ng = g.needs_grad(a.id) || g.needs_grad(b.id);
    if (!ng) return g.push(std::move(v), false, nullptr);
    int ia = a.id, ib = b.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, ib, self](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        if (gr.needs_grad(ia)) gr.grad(ia) += go.cwiseProduct(gr.value(ib));
        if (gr.needs_grad(ib)) gr.grad(ib) += go.cwiseProduct(gr.value(ia));
    });
}

/// k*a + c, elementwise with scalar constants.
template <class S>
Var<S> affine(Var<S> a, S k, S c) {
    Graph<S>& g = *a.g;
    DenseMat<S> v = (a.value().array() * k + c).matrix();
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self, k](Graph<S>& gr) {
        gr.grad(ia) += gr.grad(self) * k;
    });
}

template <class S>
Var<S> scale(Var<S> a, S k) {
    return affine(a, k, S(0));
}

/// Adds a 1xN bias row to every row of a MxN matrix.
template <class S>
Var<S> add_rowvec(Var<S> a, Var<S> bias) {
    if (bias.rows() != 1 || bias.cols() != a.cols()) detail::shape_error("add_rowvec", a, bias);
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().rowwise() + bias.value().row(0);
    const bool ng = g.needs_grad(a.id) || g.needs_grad(bias.id);
    if (!ng) return g.push(std::move(v), false, nullptr);
    int ia = a.id, ib = bias.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, ib, self](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        if (gr.needs_grad(ia)) gr.grad(ia) += go;
        if (gr.needs_grad(ib)) gr.grad(ib) += go.colwise().sum();
    });
}

namespace detail {
/// Shared shape for unary elementwise ops: dvalue computed from (x, y).
template <class S, class FwdF, class BwdF>
Var<S> unary(Var<S> a, FwdF&& fwd, BwdF&& bwd) {
    Graph<S>& g = *a.g;
    DenseMat<S> v = fwd(a.value());
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self, bwd](Graph<S>& gr) {
        gr.grad(ia) += gr.grad(self).cwiseProduct(bwd(gr.value(ia), gr.value(self)));
    });
}
}  // namespace detail

template <class S>
Var<S> sigmoid(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>((S(1) / (S(1) + (-x.array()).exp()))); },
        [](const DenseMat<S>&, const DenseMat<S>& y) {
            return DenseMat<S>((y.array() * (S(1) - y.array())).matrix());
        });
}

template <class S>
Var<S> tanh_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().tanh().matrix()); },
        [](const DenseMat<S>&, const DenseMat<S>& y) {
            return DenseMat<S>((S(1) - y.array().square()).matrix());
        });
}

template <class S>
Var<S> relu(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.cwiseMax(S(0))); },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>((x.array() > S(0)).template cast<S>().matrix());
        });
}

template <class S>
Var<S> log_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().log().matrix()); },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>(x.array().inverse().matrix());
        });
}

template <class S>
Var<S> sqrt_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().sqrt().matrix()); },
        [](const DenseMat<S>&, const DenseMat<S>& y) {
            return DenseMat<S>((S(0.5) * y.array().inverse()).matrix());
        });
}

template <class S>
Var<S> square(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().square().matrix()); },
        [](const DenseMat<S>& x, const DenseMat<S>&) { return DenseMat<S>(S(2) * x); });
}

template <class S>
Var<S> cos_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().cos().matrix()); },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>((-x.array().sin()).matrix());
        });
}

template <class S>
Var<S> sin_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.array().sin().matrix()); },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>(x.array().cos().matrix());
        });
}

template <class S>
Var<S> abs_f(Var<S> a) {
    return detail::unary(
        a, [](const DenseMat<S>& x) { return DenseMat<S>(x.cwiseAbs()); },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>(x.array().sign().matrix());
        });
}

/// x^p elementwise for x >= 0.
template <class S>
Var<S> pow_f(Var<S> a, S p) {
    return detail::unary(
        a, [p](const DenseMat<S>& x) { return DenseMat<S>(x.array().pow(p).matrix()); },
        [p](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>((p * x.array().pow(p - S(1))).matrix());
        });
}

/// Elementwise smooth-L1: 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
template <class S>
Var<S> smooth_l1(Var<S> a) {
    return detail::unary(
        a,
        [](const DenseMat<S>& x) {
            return DenseMat<S>((x.array().abs() < S(1))
                                   .select(S(0.5) * x.array().square(), x.array().abs() - S(0.5))
                                   .matrix());
        },
        [](const DenseMat<S>& x, const DenseMat<S>&) {
            return DenseMat<S>(
                (x.array().abs() < S(1)).select(x.array(), x.array().sign()).matrix());
        });
}

template <class S>
Var<S> transpose(Var<S> a) {
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().transpose();
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self](Graph<S>& gr) {
        gr.grad(ia) += gr.grad(self).transpose();
    });
}

template <class S>
Var<S> slice_rows(Var<S> a, int r0, int n) {
    if (r0 < 0 || n < 0 || r0 + n > a.rows()) throw std::invalid_argument("slice_rows: out of range");
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().middleRows(r0, n);
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self, r0, n](Graph<S>& gr) {
        gr.grad(ia).middleRows(r0, n) += gr.grad(self);
    });
}

template <class S>
Var<S> row(Var<S> a, int r) {
    return slice_rows(a, r, 1);
}

template <class S>
Var<S> slice_cols(Var<S> a, int c0, int n) {
    if (c0 < 0 || n < 0 || c0 + n > a.cols()) throw std::invalid_argument("slice_cols: out of range");
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().middleCols(c0, n);
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self, c0, n](Graph<S>& gr) {
        gr.grad(ia).middleCols(c0, n) += gr.grad(self);
    });
}

/// Gathers rows at `idx` (duplicates allowed).
template <class S>
Var<S> select_rows(Var<S> a, std::vector<int> idx) {
    Graph<S>& g = *a.g;
    DenseMat<S> v(static_cast<long>(idx.size()), a.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) v.row(static_cast<long>(i)) = a.value().row(idx[i]);
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self, idx = std::move(idx)](Graph<S>& gr) {
        const auto& go = gr.grad(self);
        auto& ga = gr.grad(ia);
        for (std::size_t i = 0; i < idx.size(); ++i) ga.row(idx[i]) += go.row(static_cast<long>(i));
    });
}

template <class S>
Var<S> concat_rows(const std::vector<Var<S>>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_rows: empty");
    Graph<S>& g = *parts[0].g;
    long rows = 0;
    const long cols = parts[0].cols();
    bool ng = false;
    for (const Var<S>& p : parts) {
        if (p.cols() != cols) detail::shape_error("concat_rows", parts[0], p);
        rows += p.rows();
        ng = ng || g.needs_grad(p.id);
    }
    DenseMat<S> v(rows, cols);
    long r = 0;
    std::vector<int> ids;
    std::vector<long> sizes;
    for (const Var<S>& p : parts) {
        v.middleRows(r, p.rows()) = p.value();
        r += p.rows();
        ids.push_back(p.id);
        sizes.push_back(p.rows());
    }
    if (!ng) return g.push(std::move(v), false, nullptr);
    int self = static_cast<int>(g.size());
    return g.push(std::move(v), true,
                  [ids = std::move(ids), sizes = std::move(sizes), self](Graph<S>& gr) {
                      const auto& go = gr.grad(self);
                      long r0 = 0;
                      for (std::size_t i = 0; i < ids.size(); ++i) {
                          if (gr.needs_grad(ids[i]))
                              gr.grad(ids[i]) += go.middleRows(r0, sizes[i]);
                          r0 += sizes[i];
                      }
                  });
}

template <class S>
Var<S> concat_cols(const std::vector<Var<S>>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_cols: empty");
    Graph<S>& g = *parts[0].g;
    long cols = 0;
    const long rows = parts[0].rows();
    bool ng = false;
    for (const Var<S>& p : parts) {
        if (p.rows() != rows) detail::shape_error("concat_cols", parts[0], p);
        cols += p.cols();
        ng = ng || g.needs_grad(p.id);
    }
    DenseMat<S> v(rows, cols);
    long c = 0;
    std::vector<int> ids;
    std::vector<long> sizes;
    for (const Var<S>& p : parts) {
        v.middleCols(c, p.cols()) = p.value();
        c += p.cols();
        ids.push_back(p.id);
        sizes.push_back(p.cols());
    }
    if (!ng) return g.push(std::move(v), false, nullptr);
    int self = static_cast<int>(g.size());
    return g.push(std::move(v), true,
                  [ids = std::move(ids), sizes = std::move(sizes), self](Graph<S>& gr) {
                      const auto& go = gr.grad(self);
                      long c0 = 0;
                      for (std::size_t i = 0; i < ids.size(); ++i) {
                          if (gr.needs_grad(ids[i]))
                              gr.grad(ids[i]) += go.middleCols(c0, sizes[i]);
                          c0 += sizes[i];
                      }
                  });
}

template <class S>
Var<S> sum(Var<S> a) {
    Graph<S>& g = *a.g;
    DenseMat<S> v(1, 1);
    v(0, 0) = a.value().sum();
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self](Graph<S>& gr) {
        gr.grad(ia).array() += gr.grad(self)(0, 0);
    });
}

template <class S>
Var<S> mean(Var<S> a) {
    const S n = static_cast<S>(a.value().size());
    return scale(sum(a), S(1) / n);
}

/// Row sums: MxN -> Mx1.
template <class S>
Var<S> rowwise_sum(Var<S> a) {
    Graph<S>& g = *a.g;
    DenseMat<S> v = a.value().rowwise().sum();
    if (!g.needs_grad(a.id)) return g.push(std::move(v), false, nullptr);
    int ia = a.id, self = static_cast<int>(g.size());
    return g.push(std::move(v), true, [ia, self](Graph<S>& gr) {
        gr.grad(ia).colwise() += gr.grad(self).col(0);
    });
}

/// Row-wise masked softmax. mask(i,j)=false excludes key j for row i; fully
/// masked rows produce a zero row and are reported through `empty_rows`.
template <class S>
Var<S> softmax_rows(Var<S> scores, const BoolMat* mask, std::vector<bool>* empty_rows = nullptr) {
    Graph<S>& g = *scores.g;
    const auto& x = scores.value();
    if (mask && (mask->rows() != x.rows() || mask->cols() != x.cols()))
        throw std::invalid_argument("softmax_rows: mask shape mismatch");
    DenseMat<S> y = DenseMat<S>::Zero(x.rows(), x.cols());
    if (empty_rows) empty_rows->assign(static_cast<std::size_t>(x.rows()), false);
    for (long i = 0; i < x.rows(); ++i) {
        S mx = std::numeric_limits<S>::lowest();
        bool any = false;
        for (long j = 0; j < x.cols(); ++j) {
            if (mask && !(*mask)(i, j)) continue;
            any = true;
            mx = std::max(mx, x(i, j));
        }
        if (!any) {
            if (empty_rows) (*empty_rows)[static_cast<std::size_t>(i)] = true;
            continue;
        }
        S z = S(0);
        for (long j = 0; j < x.cols(); ++j) {
            if (mask && !(*mask)(i, j)) continue;
            y(i, j) = std::exp(x(i, j) - mx);
            z += y(i, j);
        }
        for (long j = 0; j < x.cols(); ++j) y(i, j) /= z;
    }
    if (!g.needs_grad(scores.id)) return g.push(std::move(y), false, nullptr);
    int ia = scores.id, self = static_cast<int>(g.size());
    return g.push(std::move(y), true, [ia, self](Graph<S>& gr) {
        const auto& yv = gr.value(self);
        const auto& go = gr.grad(self);
        auto& gx = gr.grad(ia);
        for (long i = 0; i < yv.rows(); ++i) {
            const S dot = yv.row(i).dot(go.row(i));
            gx.row(i).array() += yv.row(i).array() * (go.row(i).array() - dot);
        }
    });
}

}  // namespace otk::nn
