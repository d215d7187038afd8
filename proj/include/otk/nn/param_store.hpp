// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "otk/common/rng.hpp"
#include "otk/nn/graph.hpp"

namespace otk::nn {

/// Named parameter tensors plus AdamW state. Names are unique; insertion is
/// explicit so two models never silently share a parameter.
template <class S>
class ParamStore {
public:
    using M = DenseMat<S>;

    struct Entry {
        M value;
        M m;  // first moment
        M v;  // second moment
    };

    void add(const std::string& name, M init) {
        if (entries_.count(name)) throw std::invalid_argument("ParamStore: duplicate name " + name);
        Entry e;
        e.m = M::Zero(init.rows(), init.cols());
        e.v = M::Zero(init.rows(), init.cols());
        e.value = std::move(init);
        entries_.emplace(name, std::move(e));
    }

    bool has(const std::string& name) const { return entries_.count(name) > 0; }

    M& value(const std::string& name) { return entry(name).value; }
    const M& value(const std::string& name) const { return entry(name).value; }
    Entry& entry(const std::string& name) {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw std::invalid_argument("ParamStore: unknown name " + name);
        return it->second;
    }
    const Entry& entry(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw std::invalid_argument("ParamStore: unknown name " + name);
        return it->second;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& [k, _] : entries_) out.push_back(k);
        return out;
    }

    std::size_t size() const { return entries_.size(); }
    long step = 0;

    /// Registers a matrix initialized uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    void add_uniform(const std::string& name, int rows, int cols, int fan_in, Rng& rng) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        M init(rows, cols);
        for (long i = 0; i < init.rows(); ++i)
            for (long j = 0; j < init.cols(); ++j)
                init(i, j) = static_cast<S>(rng.uniform(-bound, bound));
        add(name, std::move(init));
    }

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::map<std::string, Entry> entries_;
};

/// Per-graph lazy binding of store parameters to leaf Vars, and gradient
/// readback after backward().
template <class S>
class Binder {
public:
    Binder(Graph<S>& g, ParamStore<S>& store, bool train = true)
        : g_(&g), store_(&store), train_(train) {}

    Var<S> operator()(const std::string& name) {
        auto it = bound_.find(name);
        if (it != bound_.end()) return it->second;
        Var<S> v = g_->leaf(store_->value(name), train_);
        bound_.emplace(name, v);
        return v;
    }

    /// Gradients of every bound parameter (call after Graph::backward).
    std::map<std::string, DenseMat<S>> grads() const {
        std::map<std::string, DenseMat<S>> out;
        for (const auto& [name, var] : bound_) {
            if (g_->has_grad(var.id))
                out.emplace(name, g_->grad(var.id));
            else
                out.emplace(name, DenseMat<S>::Zero(var.rows(), var.cols()));
        }
        return out;
    }

    Graph<S>& graph() { return *g_; }
    ParamStore<S>& store() { return *store_; }

private:
    Graph<S>* g_;
    ParamStore<S>* store_;
    bool train_;
    std::map<std::string, Var<S>> bound_;
};

}  // namespace otk::nn
