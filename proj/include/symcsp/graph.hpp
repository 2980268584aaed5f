// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symcsp/error.hpp"
#include "symcsp/rational.hpp"

namespace symcsp {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected graph without loops or parallel edges. Vertices are dense indices
/// with string names; edges keep insertion order.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) add_vertex("v" + std::to_string(i));
  }

  std::size_t add_vertex(std::string name) {
    if (index_.count(name)) throw InvalidParameter("duplicate vertex '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    adj_.emplace_back();
    return names_.size() - 1;
  }

  std::size_t add_edge(std::size_t a, std::size_t b) {
    if (a >= vertex_count() || b >= vertex_count()) throw InvalidParameter("edge endpoint out of range");
    if (a == b) throw InvalidParameter("self-loop on '" + names_[a] + "'");
    Edge e{std::min(a, b), std::max(a, b)};
    if (edge_ids_.count(key(e.u, e.v)))
      throw InvalidParameter("parallel edge " + names_[e.u] + "-" + names_[e.v]);
    edge_ids_.emplace(key(e.u, e.v), edges_.size());
    edges_.push_back(e);
    adj_[a].insert(std::upper_bound(adj_[a].begin(), adj_[a].end(), b), b);
    adj_[b].insert(std::upper_bound(adj_[b].begin(), adj_[b].end(), a), a);
    return edges_.size() - 1;
  }

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }
  const std::string& name(std::size_t v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> edge_index(std::size_t a, std::size_t b) const {
    if (a == b) return std::nullopt;
    auto it = edge_ids_.find(key(std::min(a, b), std::max(a, b)));
    if (it == edge_ids_.end()) return std::nullopt;
    return it->second;
  }
  bool has_edge(std::size_t a, std::size_t b) const { return edge_index(a, b).has_value(); }

  /// Common degree when regular (0 for the empty graph).
  std::optional<std::size_t> regular_degree() const {
    if (names_.empty()) return 0;
    std::size_t d = degree(0);
    for (std::size_t v = 1; v < vertex_count(); ++v)
      if (degree(v) != d) return std::nullopt;
    return d;
  }

  std::optional<std::vector<int>> two_coloring() const {
    std::vector<int> color(vertex_count(), -1);
    for (std::size_t s = 0; s < vertex_count(); ++s) {
      if (color[s] != -1) continue;
      color[s] = 0;
      std::queue<std::size_t> q;
      q.push(s);
      while (!q.empty()) {
        auto x = q.front();
        q.pop();
        for (auto y : adj_[x]) {
          if (color[y] == -1) {
            color[y] = 1 - color[x];
            q.push(y);
          } else if (color[y] == color[x]) {
            return std::nullopt;
          }
        }
      }
    }
    return color;
  }
  bool is_bipartite() const { return two_coloring().has_value(); }

  /// Component id per vertex, ids assigned in order of smallest member.
  std::vector<std::size_t> components(std::size_t* count = nullptr) const {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> comp(vertex_count(), unset);
    std::size_t next = 0;
    for (std::size_t s = 0; s < vertex_count(); ++s) {
      if (comp[s] != unset) continue;
      comp[s] = next;
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : adj_[x])
          if (comp[y] == unset) {
            comp[y] = next;
            stack.push_back(y);
          }
      }
      ++next;
    }
    if (count) *count = next;
    return comp;
  }

  bool is_connected() const {
    std::size_t c = 0;
    components(&c);
    return c <= 1;
  }

  /// Shortest cycle length; nullopt means infinite (forest).
  std::optional<std::size_t> girth() const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    const std::size_t n = vertex_count();
    std::vector<std::size_t> dist(n), parent(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
      dist[s] = 0;
      parent[s] = s;
      std::queue<std::size_t> q;
      q.push(s);
      while (!q.empty()) {
        auto x = q.front();
        q.pop();
        if (2 * dist[x] + 1 >= best) break;
        for (auto y : adj_[x]) {
          if (dist[y] == std::numeric_limits<std::size_t>::max()) {
            dist[y] = dist[x] + 1;
            parent[y] = x;
            q.push(y);
          } else if (parent[x] != y) {
            best = std::min(best, dist[x] + dist[y] + 1);
          }
        }
      }
    }
    if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
    return best;
  }

  /// Shortest path with lexicographically least predecessor choice; empty if unreachable.
  std::vector<std::size_t> shortest_path(std::size_t from, std::size_t to) const {
    const std::size_t n = vertex_count();
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n, unset);
    parent[to] = to;
    std::queue<std::size_t> q;
    q.push(to);
    while (!q.empty() && parent[from] == unset) {
      auto x = q.front();
      q.pop();
      for (auto y : adj_[x])
        if (parent[y] == unset) {
          parent[y] = x;
          q.push(y);
        }
    }
    if (parent[from] == unset) return {};
    std::vector<std::size_t> path{from};
    while (path.back() != to) path.push_back(parent[path.back()]);
    return path;
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  static std::uint64_t key(std::size_t u, std::size_t v) { return (std::uint64_t(u) << 32) | std::uint64_t(v); }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_ids_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// Edge weights aligned with graph.edges().
struct WeightedGraph {
  SimpleGraph graph;
  std::vector<ExactRatio> weights;

  static WeightedGraph unit(SimpleGraph g) {
    std::vector<ExactRatio> w(g.edge_count(), ExactRatio(1));
    return {std::move(g), std::move(w)};
  }
  ExactRatio total_weight() const {
    ExactRatio s = 0;
    for (auto& w : weights) s += w;
    return s;
  }
};

inline SimpleGraph complete_graph(std::size_t n) {
  SimpleGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline SimpleGraph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidParameter("cycle needs at least 3 vertices");
  SimpleGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline SimpleGraph complete_bipartite_graph(std::size_t a, std::size_t b) {
  SimpleGraph g(a + b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) g.add_edge(i, a + j);
  return g;
}

/// Outer 5-cycle 0..4, spokes i-(i+5), inner pentagram on 5..9.
inline SimpleGraph petersen_graph() {
  SimpleGraph g(10);
  for (std::size_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

}  // namespace symcsp
