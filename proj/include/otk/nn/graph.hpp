// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <Eigen/Core>
#include <cassert>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace otk::nn {

template <class S>
using DenseMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
class Graph;

/// Handle to a node on a Graph's tape. Cheap to copy; values are dense
/// matrices evaluated eagerly at op-construction time.
template <class S>
struct Var {
    Graph<S>* g = nullptr;
    int id = -1;

    const DenseMat<S>& value() const { return g->value(id); }
    int rows() const { return static_cast<int>(value().rows()); }
    int cols() const { return static_cast<int>(value().cols()); }
    bool valid() const { return g != nullptr && id >= 0; }
};

/// Reverse-mode tape over Eigen dense matrices. Ops append nodes eagerly;
/// backward() replays the tape in reverse, accumulating gradients into every
/// node flagged needs_grad. One Graph per forward/backward pass.
template <class S>
class Graph {
public:
    using M = DenseMat<S>;

    struct Node {
        M value;
        M grad;  // allocated on demand during backward
        std::function<void(Graph&)> back;
        bool needs_grad = false;
        bool grad_alloc = false;
    };

    Var<S> leaf(M value, bool needs_grad) {
        return push(std::move(value), needs_grad, nullptr);
    }

    Var<S> constant(M value) { return push(std::move(value), false, nullptr); }

    Var<S> constant_scalar(S v) {
        M m(1, 1);
        m(0, 0) = v;
        return constant(std::move(m));
    }

    /// Appends a node; `back` may be null for sources.
    Var<S> push(M value, bool needs_grad, std::function<void(Graph&)> back) {
        nodes_.push_back(Node{std::move(value), M(), std::move(back), needs_grad, false});
        return Var<S>{this, static_cast<int>(nodes_.size()) - 1};
    }

    const M& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }

    /// Gradient accumulator for a node, zero-initialized to the value's shape.
    M& grad(int id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (!n.grad_alloc) {
            n.grad = M::Zero(n.value.rows(), n.value.cols());
            n.grad_alloc = true;
        }
        return n.grad;
    }

    bool has_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad_alloc; }

    /// Runs reverse-mode accumulation from a 1x1 root.
    void backward(const Var<S>& root) {
        if (root.value().size() != 1)
            throw std::invalid_argument("backward: root must be a 1x1 scalar");
        grad(root.id)(0, 0) = S(1);
        for (int i = root.id; i >= 0; --i) {
            Node& n = nodes_[static_cast<std::size_t>(i)];
            if (!n.grad_alloc || !n.back) continue;
            n.back(*this);
        }
    }

    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

private:
    std::vector<Node> nodes_;
};

}  // namespace otk::nn
