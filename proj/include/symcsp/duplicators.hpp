// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "symcsp/constructions.hpp"
#include "symcsp/game.hpp"

namespace symcsp {

// ---------------------------------------------------------------------------
// Shared helpers

/// D1(e) == D2(e) + g*(u) + g*(v): the induced map preserves every lifted constraint on e.
inline bool edge_consistent(const GroupUgInstance& u1, const GroupUgInstance& u2, std::size_t u, std::size_t v,
                            const GStarMap& g) {
  const Bundle* b1 = u1.bundle_between(u, v);
  const Bundle* b2 = u2.bundle_between(u, v);
  if (!b1 || !b2) return !b1 && !b2;
  auto s = g[u] + g[v];
  std::vector<Gf2Vector> shifted;
  for (auto& z : b2->diffs) shifted.push_back(z + s);
  std::sort(shifted.begin(), shifted.end());
  return shifted == b1->diffs;
}

/// Same question answered on the lifted structures element by element.
inline bool edge_consistent_lifted(const GroupUgInstance& u1, const GroupUgInstance& u2, std::size_t u,
                                   std::size_t v, const GStarMap& g) {
  const std::uint64_t q = std::uint64_t{1} << u1.m();
  for (std::uint64_t x = 0; x < q; ++x)
    for (std::uint64_t y = 0; y < q; ++y) {
      LiftedVertex a{u, Gf2Vector(u1.m(), x)}, b{v, Gf2Vector(u1.m(), y)};
      if (lifted_allowed_diffs(u1, a, b) != lifted_allowed_diffs(u2, apply_gstar(g, a), apply_gstar(g, b))) return false;
    }
  return true;
}

namespace detail {

inline std::string edge_label(const GroupUgInstance& u, std::size_t a, std::size_t b) {
  return "{" + u.name(a) + "," + u.name(b) + "}";
}

inline void require_same_graph(const GroupUgInstance& u1, const GroupUgInstance& u2) {
  if (u1.vertex_count() != u2.vertex_count() || u1.m() != u2.m())
    throw PreconditionError("instances differ in vertex count or group");
  if (u1.constraint_graph() != u2.constraint_graph())
    throw PreconditionError("instances are not defined over the same simple graph");
}

inline Check edge_check(std::string name, const GroupUgInstance& u1, const GroupUgInstance& u2,
                        const std::vector<Edge>& edges, const GStarMap& g, bool lifted) {
  Check c{std::move(name), true, ""};
  for (auto& e : edges) {
    bool ok = lifted && u1.m() <= 4 ? edge_consistent_lifted(u1, u2, e.u, e.v, g) : edge_consistent(u1, u2, e.u, e.v, g);
    if (!ok) {
      c.ok = false;
      c.detail = "edge " + edge_label(u1, e.u, e.v) + " is not preserved";
      break;
    }
  }
  return c;
}

}  // namespace detail

/// Pins every pebbled vertex to its pebble's shift and leaves the rest at 0. Against
/// structures that agree everywhere this is an isomorphism.
class IdentityDuplicator : public Duplicator {
 public:
  explicit IdentityDuplicator(const GroupUgInstance& a) : n_(a.vertex_count()), m_(a.m()) {}
  std::string name() const override { return "identity"; }
  DuplicatorReply respond(const GameState& s, AssertLevel) override {
    GStarMap g(n_, Gf2Vector::zero(m_));
    for (auto& p : s.placed()) g[p.a.v] = p.a.g + p.b.g;
    return {g, {}};
  }
  std::unique_ptr<Duplicator> clone() const override { return std::make_unique<IdentityDuplicator>(*this); }

 private:
  std::size_t n_;
  unsigned m_;
};

// ---------------------------------------------------------------------------
// k = 2

/// With a pebble on (x_{v0}^{g1}, x_{v0}^{g2}): g*(v0) = g1 + g2, and each neighbour v gets
/// g1 + g2 + s where D2 + s = D1 on {v0, v}; for singleton bundles {0} and {g3} that is
/// g1 + g2 + g3. All other vertices get 0.
class DuplicatorK2 : public Duplicator {
 public:
  DuplicatorK2(const GroupUgInstance& u1, const GroupUgInstance& u2) : u1_(u1), u2_(u2) {
    detail::require_same_graph(u1, u2);
    graph_ = u1.constraint_graph();
  }
  std::string name() const override { return "k2"; }

  DuplicatorReply respond(const GameState& s, AssertLevel level) override {
    const unsigned m = u1_.m();
    GStarMap g(u1_.vertex_count(), Gf2Vector::zero(m));
    auto placed = s.placed();
    if (placed.empty()) return {g, {}};
    if (placed.size() > 1) throw StrategyViolation(Side::Duplicator, "k = 2 strategy sees more than one pebble");
    const auto& p = placed[0];
    if (p.a.v != p.b.v) throw StrategyViolation(Side::Duplicator, "pebble pair lies on different base vertices");
    const std::size_t v0 = p.a.v;
    const Gf2Vector base = p.a.g + p.b.g;
    g[v0] = base;
    std::vector<Edge> star;
    for (auto v : graph_.neighbors(v0)) {
      star.push_back({std::min(v0, v), std::max(v0, v)});
      if (auto s_shift = matching_shift(v0, v)) g[v] = base + *s_shift;
    }
    std::vector<Check> checks;
    if (level != AssertLevel::Off)
      checks.push_back(detail::edge_check("k2-incident-edges", u1_, u2_, star, g, level == AssertLevel::Full));
    return {g, checks};
  }

  std::unique_ptr<Duplicator> clone() const override { return std::make_unique<DuplicatorK2>(*this); }

 private:
  std::optional<Gf2Vector> matching_shift(std::size_t a, std::size_t b) const {
    const auto& d1 = u1_.bundle_between(a, b)->diffs;
    const auto& d2 = u2_.bundle_between(a, b)->diffs;
    if (d1.size() != d2.size()) return std::nullopt;
    std::vector<Gf2Vector> cands;
    for (auto& z : d1) cands.push_back(d2[0] + z);
    std::sort(cands.begin(), cands.end());
    for (auto& s : cands) {
      std::vector<Gf2Vector> shifted;
      for (auto& z : d2) shifted.push_back(z + s);
      std::sort(shifted.begin(), shifted.end());
      if (shifted == d1) return s;
    }
    return std::nullopt;
  }

  GroupUgInstance u1_, u2_;
  SimpleGraph graph_;
};

// ---------------------------------------------------------------------------
// Klein pair with the robber

/// Plays the robber on H alongside the game. Each round the cops are the pebbled base
/// vertices; every interior vertex p_j of the robber's path gets m(e_j) added, where e_j
/// is the edge at p_j off the path.
class DuplicatorCops : public Duplicator {
 public:
  explicit DuplicatorCops(const KleinPair& pair)
      : u1_(pair.u1), u2_(pair.u2), robber_(pair.h), coloring_(pair.coloring), h_(pair.h) {
    if (h_.regular_degree() != std::optional<std::size_t>(3))
      throw PreconditionError("cops strategy needs a 3-regular base graph");
    gstar_.assign(h_.vertex_count(), Gf2Vector::zero(2));
    at_ = h_.edge(pair.star_edge);
  }
  std::string name() const override { return "cops"; }

  Edge robber_edge() const noexcept { return at_; }
  const std::vector<std::size_t>& last_path() const noexcept { return path_; }

  DuplicatorReply respond(const GameState& s, AssertLevel level) override {
    auto cops = s.pebbled_vertices();
    path_ = robber_.move(cops, at_);
    if (!path_.empty()) {
      for (std::size_t j = 1; j + 1 < path_.size(); ++j) {
        std::size_t off = h_.vertex_count();
        for (auto w : h_.neighbors(path_[j]))
          if (w != path_[j - 1] && w != path_[j + 1]) off = w;
        gstar_[path_[j]] += klein_element(coloring_[*h_.edge_index(path_[j], off)]);
      }
      auto x = path_[path_.size() - 2], y = path_.back();
      at_ = {std::min(x, y), std::max(x, y)};
    }
    std::vector<Check> checks;
    if (level != AssertLevel::Off) {
      std::vector<Edge> edges;
      for (auto& e : h_.edges()) {
        if (e == at_) continue;
        bool near = false;
        for (auto c : cops) near |= e.u == c || e.v == c;
        if (level == AssertLevel::Full || near) edges.push_back(e);
      }
      checks.push_back(detail::edge_check("off-robber-edges", u1_, u2_, edges, gstar_, level == AssertLevel::Full));
      Check disjoint{"robber-edge-distinct", true, ""};
      auto s_shift = gstar_[at_.u] + gstar_[at_.v];
      for (auto& z1 : u1_.bundle_between(at_.u, at_.v)->diffs)
        for (auto& z2 : u2_.bundle_between(at_.u, at_.v)->diffs)
          if (z1 == z2 + s_shift) {
            disjoint.ok = false;
            disjoint.detail = "shifted values on " + detail::edge_label(u1_, at_.u, at_.v) + " coincide";
          }
      checks.push_back(disjoint);
    }
    return {gstar_, checks};
  }

  std::unique_ptr<Duplicator> clone() const override { return std::make_unique<DuplicatorCops>(*this); }

 private:
  GroupUgInstance u1_, u2_;
  RobberStrategy robber_;
  std::vector<int> coloring_;
  SimpleGraph h_;
  GStarMap gstar_;
  Edge at_;
  std::vector<std::size_t> path_;
};

// ---------------------------------------------------------------------------
// Random pair: trees, forests and path extension

struct SteinerTree {
  std::vector<std::size_t> vertices;  // sorted
  std::vector<Edge> edges;            // sorted
};

/// Minimum Steiner tree (unit edge weights) by dynamic programming over terminal subsets.
/// Ties resolve toward lower vertex indices and BFS shortest paths.
inline SteinerTree steiner_tree(const SimpleGraph& g, std::vector<std::size_t> terminals) {
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  if (terminals.empty()) return {};
  if (terminals.size() > 12) throw SizeError("too many Steiner terminals");
  const std::size_t n = g.vertex_count();
  constexpr auto inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> dist(n);
  auto bfs = [&](std::size_t s) {
    std::vector<std::size_t> d(n, inf);
    std::queue<std::size_t> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      for (auto y : g.neighbors(x))
        if (d[y] == inf) d[y] = d[x] + 1, q.push(y);
    }
    return d;
  };
  for (std::size_t v = 0; v < n; ++v) dist[v] = bfs(v);
  const std::size_t root = terminals[0];
  for (auto t : terminals)
    if (dist[root][t] >= inf) throw PreconditionError("Steiner terminals lie in different components");

  const std::size_t kk = terminals.size() - 1;
  SteinerTree out;
  std::set<std::size_t> verts{root};
  std::set<std::pair<std::size_t, std::size_t>> edges;
  auto add_path = [&](std::size_t from, std::size_t to) {
    auto p = g.shortest_path(from, to);
    for (std::size_t i = 0; i < p.size(); ++i) {
      verts.insert(p[i]);
      if (i + 1 < p.size()) edges.insert({std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1])});
    }
  };
  if (kk > 0) {
    const std::size_t full = (std::size_t{1} << kk) - 1;
    std::vector<std::vector<std::size_t>> dp(full + 1, std::vector<std::size_t>(n, inf));
    std::vector<std::vector<std::size_t>> split(full + 1, std::vector<std::size_t>(n, 0));
    std::vector<std::vector<std::size_t>> via(full + 1, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < kk; ++i)
      for (std::size_t v = 0; v < n; ++v) dp[std::size_t{1} << i][v] = dist[terminals[i + 1]][v];
    for (std::size_t s = 1; s <= full; ++s) {
      if (std::popcount(s) < 2) continue;
      std::vector<std::size_t> merged(n, inf);
      const std::size_t low = s & (~s + 1);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t s1 = (s - 1) & s; s1 > 0; s1 = (s1 - 1) & s) {
          if (!(s1 & low)) continue;
          auto c = dp[s1][v] + dp[s ^ s1][v];
          if (c < merged[v] || (c == merged[v] && s1 < split[s][v])) merged[v] = c, split[s][v] = s1;
        }
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u) {
          auto c = merged[u] + dist[u][v];
          if (c < dp[s][v]) dp[s][v] = c, via[s][v] = u;
        }
    }
    std::function<void(std::size_t, std::size_t)> build = [&](std::size_t s, std::size_t v) {
      if (std::popcount(s) == 1) {
        add_path(terminals[std::countr_zero(s) + 1], v);
        return;
      }
      auto u = via[s][v];
      add_path(u, v);
      auto s1 = split[s][u];
      build(s1, u);
      build(s ^ s1, u);
    };
    build(full, root);
  }
  out.vertices.assign(verts.begin(), verts.end());
  for (auto& [a, b] : edges) out.edges.push_back({a, b});
  if (out.edges.size() + 1 != out.vertices.size()) throw Error("Steiner reconstruction is not a tree");
  return out;
}

/// Values of g* on every vertex of `path` so that each path edge is consistent and the
/// endpoints keep g_start and g_end. z[i], b[i] belong to edge {path[i], path[i+1]}.
inline std::vector<Gf2Vector> extend_along_path(const std::vector<std::size_t>& path, const Gf2Vector& g_start,
                                                const Gf2Vector& g_end, const std::vector<Gf2Subspace>& z,
                                                const std::vector<Gf2Vector>& b) {
  if (path.size() < 2 || z.size() + 1 != path.size() || b.size() + 1 != path.size())
    throw InvalidParameter("path data does not match the path length");
  const unsigned m = g_start.dim();
  // Greedy basis: left to right, keep each Z basis vector that raises the rank.
  Gf2Subspace acc(m);
  std::vector<Gf2Vector> basis;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (auto& v : z[i].basis())
      if (acc.insert(v)) basis.push_back(v), owner.push_back(i);
  Gf2Vector target = g_start + g_end;
  for (auto& x : b) target += x;
  auto c = coefficients_in_basis(target, basis);
  std::vector<Gf2Vector> out{g_start};
  for (std::size_t i = 0; i < z.size(); ++i) {
    Gf2Vector step = b[i];
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (owner[j] == i && c[j]) step += basis[j];
    out.push_back(out.back() + step);
  }
  return out;
}

/// Tree strategy on the random pair restricted to good edges, played per connected
/// component of the good-edge graph.
class DuplicatorTree : public Duplicator {
 public:
  DuplicatorTree(const InapproxPair& pair) : u1_(pair.u1), u2_(pair.u2), r_(pair.params.r) {
    const auto n = pair.base.vertex_count();
    for (std::size_t i = 0; i < n; ++i) h_.add_vertex(pair.base.name(i));
    for (std::size_t e = 0; e < pair.base.edge_count(); ++e)
      if (pair.good[e]) {
        auto& ed = pair.base.edge(e);
        h_.add_edge(ed.u, ed.v);
        z_.push_back(pair.z[e]);
        b_.push_back(pair.b[e]);
      }
    comp_ = h_.components(&comp_count_);
    prev_.assign(comp_count_, {});
  }
  std::string name() const override { return "tree"; }

  struct Plan {
    SteinerTree tree;
    std::vector<std::optional<Gf2Vector>> g;
  };

  DuplicatorReply respond(const GameState& s, AssertLevel level) override {
    const auto n = h_.vertex_count();
    const unsigned m = u1_.m();
    pebbled_ = s.pebbled_vertices();
    plans_.assign(n, {});
    GStarMap out(n, Gf2Vector::zero(m));
    Check prop1{"prop1-pebbles-fixed", true, ""}, prop2{"prop2-tree-edges", true, ""},
        girth{"girth-lemma", true, ""}, chords{"tree-chords", true, ""};
    for (std::size_t u = 0; u < n; ++u) {
      plans_[u] = plan_for(u, level != AssertLevel::Off ? &girth : nullptr);
      auto& plan = plans_[u];
      out[u] = *plan.g[u];
      if (level == AssertLevel::Off) continue;
      GStarMap local(n, Gf2Vector::zero(m));
      for (auto v : plan.tree.vertices) local[v] = *plan.g[v];
      const auto& prev = prev_[comp_[u]];
      for (auto v : pebbled_) {
        if (comp_[v] != comp_[u] || !prop1.ok) continue;
        if (!prev.g.size() || !prev.g[v] || *plan.g[v] != *prev.g[v]) {
          prop1.ok = false;
          prop1.detail = "vertex " + h_.name(v) + " changes in the tree for " + h_.name(u);
        }
      }
      if (prop2.ok) {
        auto c = detail::edge_check("", u1_, u2_, plan.tree.edges, local, false);
        if (!c.ok) prop2.ok = false, prop2.detail = c.detail + " in the tree for " + h_.name(u);
      }
      if (level == AssertLevel::Full && chords.ok) {
        std::vector<Edge> extra;
        for (std::size_t i = 0; i < plan.tree.vertices.size(); ++i)
          for (std::size_t j = i + 1; j < plan.tree.vertices.size(); ++j) {
            auto a = plan.tree.vertices[i], b = plan.tree.vertices[j];
            if (h_.has_edge(a, b) &&
                !std::binary_search(plan.tree.edges.begin(), plan.tree.edges.end(), Edge{a, b}))
              extra.push_back({a, b});
          }
        auto c = detail::edge_check("", u1_, u2_, extra, local, false);
        if (!c.ok) chords.ok = false, chords.detail = c.detail + " (chord) for " + h_.name(u);
      }
    }
    std::vector<Check> checks;
    if (level != AssertLevel::Off) checks = {girth, prop1, prop2};
    if (level == AssertLevel::Full) checks.push_back(chords);
    return {out, checks};
  }

  void observe(const GameState& s, std::size_t pebble) override {
    auto u = s.pebbles.at(pebble)->a.v;
    if (plans_.size() != h_.vertex_count()) throw Error("observe called before respond");
    prev_[comp_[u]] = plans_[u];
  }

  std::unique_ptr<Duplicator> clone() const override { return std::make_unique<DuplicatorTree>(*this); }

  const Plan& plan(std::size_t u) const { return plans_.at(u); }

 private:
  const Gf2Subspace& z_of(std::size_t a, std::size_t b) const { return z_[*h_.edge_index(a, b)]; }
  const Gf2Vector& b_of(std::size_t a, std::size_t b) const { return b_[*h_.edge_index(a, b)]; }

  Plan plan_for(std::size_t u, Check* girth) const {
    const unsigned m = u1_.m();
    const auto n = h_.vertex_count();
    const auto& prev = prev_[comp_[u]];
    std::vector<std::size_t> terminals{u};
    for (auto v : pebbled_)
      if (comp_[v] == comp_[u]) terminals.push_back(v);
    Plan plan;
    plan.tree = steiner_tree(h_, terminals);
    plan.g.assign(n, std::nullopt);
    const auto& tv = plan.tree.vertices;
    auto in_prev = [&](std::size_t v) {
      return std::binary_search(prev.tree.vertices.begin(), prev.tree.vertices.end(), v);
    };
    auto prev_edge = [&](const Edge& e) {
      return std::binary_search(prev.tree.edges.begin(), prev.tree.edges.end(), e);
    };
    // Step 1: copy from the previous tree.
    for (auto v : tv)
      if (in_prev(v)) plan.g[v] = prev.g[v];

    // Tree adjacency and special vertices (P plus the previous tree).
    std::map<std::size_t, std::vector<std::size_t>> adj;
    for (auto& e : plan.tree.edges) adj[e.u].push_back(e.v), adj[e.v].push_back(e.u);
    std::set<std::size_t> special(terminals.begin(), terminals.end());
    for (auto v : tv)
      if (adj[v].size() >= 3 || in_prev(v)) special.insert(v);

    // Segments of the tree minus previous-tree edges, split at special vertices.
    std::vector<std::vector<std::size_t>> segments;
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (auto start : special)
      for (auto next : adj[start]) {
        Edge first{std::min(start, next), std::max(start, next)};
        if (prev_edge(first) || used.count({first.u, first.v})) continue;
        std::vector<std::size_t> seg{start, next};
        used.insert({first.u, first.v});
        while (!special.count(seg.back())) {
          auto cur = seg.back(), back = seg[seg.size() - 2];
          std::size_t nxt = adj[cur][0] == back ? adj[cur][1] : adj[cur][0];
          used.insert({std::min(cur, nxt), std::max(cur, nxt)});
          seg.push_back(nxt);
        }
        segments.push_back(seg);
      }

    // Step 2: the forest of short segments.
    std::vector<Edge> forest;
    std::set<std::size_t> forest_vertices;
    std::vector<const std::vector<std::size_t>*> long_segments;
    for (auto& seg : segments) {
      if (seg.size() - 1 < r_) {
        for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
          forest.push_back({std::min(seg[i], seg[i + 1]), std::max(seg[i], seg[i + 1])});
          forest_vertices.insert(seg[i]), forest_vertices.insert(seg[i + 1]);
        }
      } else {
        long_segments.push_back(&seg);
      }
    }
    std::sort(forest.begin(), forest.end());
    if (girth && girth->ok) {
      // No forest component may touch the previous tree twice.
      std::map<std::size_t, std::size_t> parent;
      std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        if (!parent.count(x)) parent[x] = x;
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (auto& e : forest) parent[find(e.u)] = find(e.v);
      std::map<std::size_t, int> hits;
      for (auto v : forest_vertices)
        if (in_prev(v) && ++hits[find(v)] >= 2) {
          girth->ok = false;
          girth->detail = "a forest component touches the previous tree twice (tree for " + h_.name(u) + ")";
        }
    }
    while (true) {
      bool progressed = false;
      for (auto& e : forest) {
        bool du = plan.g[e.u].has_value(), dv = plan.g[e.v].has_value();
        if (du != dv) {
          auto from = du ? e.u : e.v, to = du ? e.v : e.u;
          plan.g[to] = *plan.g[from] + b_of(e.u, e.v);
          progressed = true;
          break;
        }
      }
      if (progressed) continue;
      auto it = std::find_if(forest_vertices.begin(), forest_vertices.end(), [&](auto v) { return !plan.g[v]; });
      if (it == forest_vertices.end()) break;
      plan.g[*it] = Gf2Vector::zero(m);
    }

    // Step 3: long segments, closed with path extension.
    for (auto* seg : long_segments) {
      auto& s = *seg;
      if (!plan.g[s.front()]) plan.g[s.front()] = Gf2Vector::zero(m);
      if (!plan.g[s.back()]) plan.g[s.back()] = Gf2Vector::zero(m);
      std::vector<Gf2Subspace> zs;
      std::vector<Gf2Vector> bs;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) zs.push_back(z_of(s[i], s[i + 1])), bs.push_back(b_of(s[i], s[i + 1]));
      auto vals = extend_along_path(s, *plan.g[s.front()], *plan.g[s.back()], zs, bs);
      for (std::size_t i = 1; i + 1 < s.size(); ++i) plan.g[s[i]] = vals[i];
    }
    for (auto v : tv)
      if (!plan.g[v]) plan.g[v] = Gf2Vector::zero(m);
    return plan;
  }

  GroupUgInstance u1_, u2_;
  std::size_t r_;
  SimpleGraph h_;
  std::vector<Gf2Subspace> z_;
  std::vector<Gf2Vector> b_;
  std::vector<std::size_t> comp_;
  std::size_t comp_count_ = 0;
  std::vector<Plan> prev_;
  std::vector<Plan> plans_;
  std::vector<std::size_t> pebbled_;
};

}  // namespace symcsp
