// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cvcluster {

/// Undirected graph with one signed weight per edge, keyed by (min, max).
template <class Node, class Weight>
class WeightedGraph {
public:
    using Edge = std::pair<Node, Node>;

    void add_node(const Node& n) { nodes_.insert(n); }

    void set_edge(const Node& i, const Node& j, const Weight& w) {
        if (i == j) throw std::invalid_argument("WeightedGraph: self loop");
        nodes_.insert(i);
        nodes_.insert(j);
        edges_[key(i, j)] = w;
        adj_[i].insert(j);
        adj_[j].insert(i);
    }

    bool has_edge(const Node& i, const Node& j) const { return edges_.contains(key(i, j)); }

    std::optional<Weight> weight(const Node& i, const Node& j) const {
        const auto it = edges_.find(key(i, j));
        if (it == edges_.end()) return std::nullopt;
        return it->second;
    }

    const Weight& at(const Node& i, const Node& j) const {
        const auto it = edges_.find(key(i, j));
        if (it == edges_.end()) throw std::out_of_range("WeightedGraph: missing edge");
        return it->second;
    }

    const std::set<Node>& neighbors(const Node& n) const {
        static const std::set<Node> none;
        const auto it = adj_.find(n);
        return it == adj_.end() ? none : it->second;
    }

    bool contains(const Node& n) const { return nodes_.contains(n); }
    const std::set<Node>& nodes() const noexcept { return nodes_; }
    const std::map<Edge, Weight>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    static Edge key(const Node& i, const Node& j) { return i < j ? Edge{i, j} : Edge{j, i}; }

    template <class F>
    auto map_weights(F&& f) const {
        WeightedGraph<Node, decltype(f(std::declval<Weight>()))> g;
        for (const Node& n : nodes_) g.add_node(n);
        for (const auto& [e, w] : edges_) g.set_edge(e.first, e.second, f(w));
        return g;
    }

private:
    std::set<Node> nodes_;
    std::map<Edge, Weight> edges_;
    std::map<Node, std::set<Node>> adj_;
};

}  // namespace cvcluster
