// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "symcsp/error.hpp"
#include "symcsp/gf2.hpp"
#include "symcsp/graph.hpp"
#include "symcsp/instances.hpp"
#include "symcsp/rational.hpp"

namespace symcsp {

// ---------------------------------------------------------------------------
// Highly unsatisfiable complete-graph instance

/// Least integer strictly greater than max{1, 2/delta}.
inline std::size_t unsat_vertex_count(const ExactRatio& delta) {
  if (delta <= 0 || delta >= 1) throw InvalidParameter("delta must lie in (0,1)");
  ExactRatio t = ExactRatio(2) / delta;
  if (t < 1) t = 1;
  BigInt fl = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  return fl.convert_to<std::size_t>() + 1;
}

/// K_n with one singleton bundle per pair, each carrying its own standard basis vector of
/// F_2^{n(n-1)/2}. No cycle of constraints is satisfiable.
inline GroupUgInstance unsat_complete_graph(const ExactRatio& delta) {
  const std::size_t n = unsat_vertex_count(delta);
  const std::size_t m = n * (n - 1) / 2;
  if (m > kMaxGf2Dim) throw InvalidParameter("delta too small: n(n-1)/2 exceeds 64 coordinates");
  GroupUgInstance u(static_cast<unsigned>(m));
  for (std::size_t i = 0; i < n; ++i) u.add_vertex("v" + std::to_string(i + 1));
  unsigned k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) u.add_bundle(i, j, {Gf2Vector::unit(static_cast<unsigned>(m), k++)});
  return u;
}

// ---------------------------------------------------------------------------
// Matchings and edge colorings

using Matching = std::vector<std::size_t>;  // edge indices

/// Checks that `color` (values 0..d-1 per edge) gives d perfect matchings.
inline std::vector<Matching> matchings_from_coloring(const SimpleGraph& g, const std::vector<int>& color) {
  if (color.size() != g.edge_count()) throw PreconditionError("coloring must cover every edge");
  auto d = g.regular_degree();
  if (!d) throw PreconditionError("graph is not regular");
  std::vector<Matching> out(*d);
  std::vector<std::vector<bool>> covered(*d, std::vector<bool>(g.vertex_count(), false));
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    int c = color[i];
    if (c < 0 || static_cast<std::size_t>(c) >= *d) throw PreconditionError("color out of range");
    auto& e = g.edge(i);
    if (covered[c][e.u] || covered[c][e.v]) throw PreconditionError("coloring is not proper");
    covered[c][e.u] = covered[c][e.v] = true;
    out[c].push_back(i);
  }
  return out;
}

inline std::vector<int> coloring_from_matchings(const SimpleGraph& g, const std::vector<Matching>& ms) {
  std::vector<int> color(g.edge_count(), -1);
  for (std::size_t c = 0; c < ms.size(); ++c)
    for (auto e : ms[c]) color.at(e) = static_cast<int>(c);
  return color;
}

/// d rounds of augmenting-path maximum matching on a d-regular bipartite graph.
inline std::vector<Matching> matching_decomposition(const SimpleGraph& g) {
  auto d = g.regular_degree();
  if (!d) throw PreconditionError("matching decomposition needs a regular graph");
  auto side = g.two_coloring();
  if (!side) throw PreconditionError("matching decomposition needs a bipartite graph (or a supplied coloring)");
  const std::size_t n = g.vertex_count();
  std::vector<bool> used(g.edge_count(), false);
  std::vector<Matching> out;
  for (std::size_t round = 0; round < *d; ++round) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> match_of(n, none);  // right vertex -> left vertex
    std::vector<bool> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t l) {
      for (auto r : g.neighbors(l)) {
        if (used[*g.edge_index(l, r)] || visited[r]) continue;
        visited[r] = true;
        if (match_of[r] == none || augment(match_of[r])) {
          match_of[r] = l;
          return true;
        }
      }
      return false;
    };
    for (std::size_t l = 0; l < n; ++l) {
      if ((*side)[l] != 0) continue;
      visited.assign(n, false);
      if (!augment(l)) throw PreconditionError("no perfect matching found; graph is not regular bipartite");
    }
    Matching m;
    for (std::size_t r = 0; r < n; ++r)
      if (match_of[r] != none) {
        auto e = *g.edge_index(match_of[r], r);
        used[e] = true;
        m.push_back(e);
      }
    std::sort(m.begin(), m.end());
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Klein four-group pair

/// Colors a, b, c are 0, 1, 2 and map to 01, 10, 11 in F_2^2; e is 00.
inline Gf2Vector klein_element(int color) {
  if (color < 0 || color > 2) throw InvalidParameter("Klein color must be 0, 1 or 2");
  return {2, static_cast<std::uint64_t>(color + 1)};
}

struct KleinPair {
  SimpleGraph h;
  std::vector<int> coloring;
  std::size_t star_edge = 0;
  GroupUgInstance u1{2}, u2{2};
};

inline KleinPair klein_pair(const SimpleGraph& h, const std::vector<int>& coloring, std::size_t star_edge) {
  if (h.regular_degree() != std::optional<std::size_t>(3)) throw PreconditionError("Klein pair needs a 3-regular graph");
  matchings_from_coloring(h, coloring);
  if (star_edge >= h.edge_count()) throw PreconditionError("star edge out of range");
  if (coloring[star_edge] != 0) throw PreconditionError("star edge must have color a");
  KleinPair p{h, coloring, star_edge, GroupUgInstance(2), GroupUgInstance(2)};
  for (auto& n : h.names()) {
    p.u1.add_vertex(n);
    p.u2.add_vertex(n);
  }
  const Gf2Vector zero = Gf2Vector::zero(2);
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto& e = h.edge(i);
    auto me = klein_element(coloring[i]);
    p.u1.add_bundle(e.u, e.v, {zero, me});
    if (i == star_edge) p.u2.add_bundle(e.u, e.v, {klein_element(1), klein_element(2)});
    else p.u2.add_bundle(e.u, e.v, {zero, me});
  }
  return p;
}

/// K_4 on v1..v4.
inline SimpleGraph k4_graph() {
  SimpleGraph g;
  for (int i = 1; i <= 4; ++i) g.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) g.add_edge(i, j);
  return g;
}

/// The K_4 configuration: a on {v1v2, v3v4}, b on {v1v3, v2v4}, c on {v1v4, v2v3}; star {v3,v4}.
inline KleinPair k4_klein_pair() {
  auto g = k4_graph();
  std::vector<int> color(g.edge_count());
  auto set = [&](int a, int b, int c) { color[*g.edge_index(a - 1, b - 1)] = c; };
  set(1, 2, 0), set(3, 4, 0), set(1, 3, 1), set(2, 4, 1), set(1, 4, 2), set(2, 3, 2);
  return klein_pair(g, color, *g.edge_index(2, 3));
}

// ---------------------------------------------------------------------------
// Cops-and-robbers graph

/// Cycle i, position t is named "c<i>_<t>". Each edge {i,j} of K_k becomes two bridges
/// joining the adjacent pair (2s, 2s+1) of cycle i with the pair reserved for i in cycle j.
inline SimpleGraph cops_robbers_graph(std::size_t k) {
  if (k < 2) throw InvalidParameter("k must be at least 2");
  const std::size_t len = 2 * (k - 1);
  SimpleGraph g;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < len; ++t) g.add_vertex("c" + std::to_string(i) + "_" + std::to_string(t));
  auto id = [&](std::size_t i, std::size_t t) { return i * len + t; };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < len; ++t)
      if (!g.has_edge(id(i, t), id(i, (t + 1) % len))) g.add_edge(id(i, t), id(i, (t + 1) % len));
  auto slot = [](std::size_t i, std::size_t j) { return j < i ? j : j - 1; };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t si = slot(i, j), sj = slot(j, i);
      g.add_edge(id(i, 2 * si), id(j, 2 * sj + 1));
      g.add_edge(id(i, 2 * si + 1), id(j, 2 * sj));
    }
  return g;
}

namespace detail {

/// Cycle index per vertex when every name has the form c<i>_<t>.
inline std::optional<std::vector<std::size_t>> cycle_regions(const SimpleGraph& h) {
  std::vector<std::size_t> region;
  for (auto& n : h.names()) {
    if (n.size() < 4 || n[0] != 'c') return std::nullopt;
    auto us = n.find('_');
    if (us == std::string::npos) return std::nullopt;
    std::size_t i = 0;
    auto [p, ec] = std::from_chars(n.data() + 1, n.data() + us, i);
    if (ec != std::errc() || p != n.data() + us) return std::nullopt;
    region.push_back(i);
  }
  return region;
}

inline bool is_complete(const SimpleGraph& h) {
  const auto n = h.vertex_count();
  return h.edge_count() == n * (n - 1) / 2;
}

}  // namespace detail

/// Robber player for the edge-robber game. On cops_robbers_graph output the robber keeps
/// to a cycle edge of a cop-free cycle; on complete graphs, to an edge with two cop-free
/// endpoints.
class RobberStrategy {
 public:
  explicit RobberStrategy(const SimpleGraph& h) : h_(h) {
    if (auto r = detail::cycle_regions(h)) {
      region_ = std::move(*r);
      cycles_ = true;
    } else if (!detail::is_complete(h)) {
      throw PreconditionError("robber strategy only covers cops_robbers_graph output and complete graphs");
    }
  }

  const SimpleGraph& graph() const noexcept { return h_; }

  bool safe(const std::vector<bool>& cop, std::size_t a, std::size_t b) const {
    return safe_with(cop, occupied_regions(cop), a, b);
  }

  /// Path p0, p1, ..., p_{l+1}: the old robber edge is {p0, p1}, the new one is
  /// {p_l, p_{l+1}}, and p1..p_l carry no cop. Empty when the robber stays.
  std::vector<std::size_t> move(const std::vector<std::size_t>& cops, Edge robber) const {
    std::vector<bool> cop(h_.vertex_count(), false);
    for (auto c : cops) cop.at(c) = true;
    if (!h_.has_edge(robber.u, robber.v)) throw PreconditionError("robber is not on an edge");
    if (cop[robber.u] && cop[robber.v]) throw StrategyViolation(Side::Duplicator, "robber edge is captured");
    const auto occupied = occupied_regions(cop);
    auto safe = [&](std::size_t a, std::size_t b) { return safe_with(cop, occupied, a, b); };
    if (safe(robber.u, robber.v)) return {};

    std::vector<std::size_t> best;
    for (int o = 0; o < 2; ++o) {
      std::size_t p0 = o ? robber.v : robber.u, p1 = o ? robber.u : robber.v;
      if (cop[p1]) continue;
      constexpr auto unset = std::numeric_limits<std::size_t>::max();
      std::vector<std::size_t> parent(h_.vertex_count(), unset);
      parent[p1] = p1;
      std::queue<std::size_t> q;
      q.push(p1);
      while (!q.empty()) {
        auto x = q.front();
        q.pop();
        std::vector<std::size_t> path;
        for (auto y = x;; y = parent[y]) {
          path.push_back(y);
          if (y == p1) break;
        }
        path.push_back(p0);
        std::reverse(path.begin(), path.end());
        for (auto y : h_.neighbors(x)) {
          if (y == p0 || std::find(path.begin(), path.end(), y) != path.end() || !safe(x, y)) continue;
          auto cand = path;
          cand.push_back(y);
          if (best.empty() || cand.size() < best.size() || (cand.size() == best.size() && cand < best))
            best = std::move(cand);
        }
        for (auto y : h_.neighbors(x))
          if (parent[y] == unset && !cop[y] && y != p0) {
            parent[y] = x;
            q.push(y);
          }
      }
    }
    if (best.empty()) throw StrategyViolation(Side::Duplicator, "robber has no legal move");
    return best;
  }

 private:
  std::vector<bool> occupied_regions(const std::vector<bool>& cop) const {
    std::vector<bool> occ(cycles_ ? h_.vertex_count() : 0, false);
    if (cycles_)
      for (std::size_t v = 0; v < cop.size(); ++v)
        if (cop[v]) occ[region_[v]] = true;
    return occ;
  }

  bool safe_with(const std::vector<bool>& cop, const std::vector<bool>& occ, std::size_t a, std::size_t b) const {
    if (!cycles_) return !cop[a] && !cop[b];
    return region_[a] == region_[b] && !occ[region_[a]];
  }

  SimpleGraph h_;
  std::vector<std::size_t> region_;
  bool cycles_ = false;
};

inline std::vector<std::size_t> robber_move(const SimpleGraph& h, const std::vector<std::size_t>& cops, Edge robber) {
  return RobberStrategy(h).move(cops, robber);
}

// ---------------------------------------------------------------------------
// Random F_2^m pair

struct ParamSet {
  ExactRatio alpha = 0, gamma = 0, epsilon = 0;
  std::uint64_t d = 0, ell = 0, m = 0, r = 0, q = 0;
  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

/// Parameters set by hand for desk-scale runs; alpha/gamma/epsilon stay 0.
inline ParamSet desk_params(std::uint64_t d, std::uint64_t ell, std::uint64_t m, std::uint64_t r) {
  ParamSet p;
  p.d = d, p.ell = ell, p.m = m, p.r = r;
  p.q = m < 64 ? std::uint64_t{1} << m : 0;
  return p;
}

/// Calls f(edge_list) for every simple path of r edges that uses edge e, each path
/// reported once with e's endpoints u before v. Returns the number of paths.
template <class F>
std::uint64_t for_each_path_through(const SimpleGraph& g, std::size_t e, std::size_t r, F&& f) {
  if (r == 0) return 0;
  const auto [u, v] = g.edge(e);
  std::uint64_t count = 0;
  std::vector<bool> on(g.vertex_count(), false);
  std::vector<std::size_t> left, right;  // vertex chains beyond u and beyond v
  on[u] = on[v] = true;
  auto emit = [&] {
    std::vector<std::size_t> edges;
    std::size_t prev = u;
    for (auto x : left) edges.push_back(*g.edge_index(prev, x)), prev = x;
    edges.push_back(e);
    prev = v;
    for (auto x : right) edges.push_back(*g.edge_index(prev, x)), prev = x;
    ++count;
    f(edges);
  };
  std::function<void(std::size_t)> grow_right = [&](std::size_t need) {
    if (need == 0) return emit();
    std::size_t tip = right.empty() ? v : right.back();
    for (auto y : g.neighbors(tip)) {
      if (on[y]) continue;
      on[y] = true;
      right.push_back(y);
      grow_right(need - 1);
      right.pop_back();
      on[y] = false;
    }
  };
  std::function<void(std::size_t, std::size_t)> grow_left = [&](std::size_t need, std::size_t rest) {
    if (need == 0) return grow_right(rest);
    std::size_t tip = left.empty() ? u : left.back();
    for (auto y : g.neighbors(tip)) {
      if (on[y]) continue;
      on[y] = true;
      left.push_back(y);
      grow_left(need - 1, rest);
      left.pop_back();
      on[y] = false;
    }
  };
  for (std::size_t a = 0; a < r; ++a) grow_left(a, r - 1 - a);
  return count;
}

inline std::uint64_t count_paths_through(const SimpleGraph& g, std::size_t e, std::size_t r) {
  return for_each_path_through(g, e, r, [](const std::vector<std::size_t>&) {});
}

/// Edge is good iff the subspaces along every r-edge simple path through it span F_2^m.
inline std::vector<bool> good_edges(const SimpleGraph& g, const std::vector<Gf2Subspace>& z, std::size_t r,
                                    unsigned m, std::uint64_t path_cap = std::uint64_t{1} << 26) {
  if (z.size() != g.edge_count()) throw InvalidParameter("one subspace per edge required");
  for (auto& s : z)
    if (s.dim() != m) throw InvalidParameter("subspace dimension differs from m");
  std::vector<bool> good(g.edge_count(), true);
  std::uint64_t seen = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for_each_path_through(g, e, r, [&](const std::vector<std::size_t>& edges) {
      if (++seen > path_cap) throw SizeError("path enumeration exceeds cap");
      if (!good[e]) return;
      Gf2Subspace acc(m);
      for (auto k : edges) {
        for (auto& row : z[k].rows()) acc.insert(Gf2Vector(m, row));
        if (acc.spans_all()) return;
      }
      good[e] = false;
    });
  }
  return good;
}

struct InapproxPair {
  SimpleGraph base;
  ParamSet params;
  std::vector<Gf2Subspace> z;
  std::vector<Gf2Vector> b;
  std::vector<bool> good;
  GroupUgInstance u1, u2, u1_full, u2_full;
  std::vector<std::string> warnings;
};

namespace detail {

inline void fill_pair_instances(InapproxPair& out) {
  for (auto* u : {&out.u1, &out.u2, &out.u1_full, &out.u2_full})
    for (auto& n : out.base.names()) u->add_vertex(n);
  for (std::size_t e = 0; e < out.base.edge_count(); ++e) {
    auto& ed = out.base.edge(e);
    auto zs = out.z[e].elements();
    std::vector<Gf2Vector> shifted;
    for (auto& z : zs) shifted.push_back(z + out.b[e]);
    out.u1_full.add_bundle(ed.u, ed.v, zs);
    out.u2_full.add_bundle(ed.u, ed.v, shifted);
    if (out.good[e]) {
      out.u1.add_bundle(ed.u, ed.v, zs);
      out.u2.add_bundle(ed.u, ed.v, shifted);
    }
  }
}

}  // namespace detail

/// Rebuilds a pair from stored per-edge data, e.g. a sidecar.
inline InapproxPair assemble_inapprox_pair(const SimpleGraph& base, const ParamSet& p, std::vector<Gf2Subspace> z,
                                           std::vector<Gf2Vector> b, std::vector<bool> good) {
  if (z.size() != base.edge_count() || b.size() != base.edge_count() || good.size() != base.edge_count())
    throw InvalidParameter("per-edge data does not match the base graph");
  const auto m = static_cast<unsigned>(p.m);
  for (std::size_t e = 0; e < z.size(); ++e)
    if (z[e].dim() != m || b[e].dim() != m) throw InvalidParameter("per-edge data has the wrong dimension");
  InapproxPair out{base, p, std::move(z), std::move(b), std::move(good), GroupUgInstance(m), GroupUgInstance(m),
                   GroupUgInstance(m), GroupUgInstance(m), {}};
  detail::fill_pair_instances(out);
  return out;
}

struct PairOptions {
  std::size_t k = 2;            // pebbles the pair should withstand
  bool girth_override = false;  // allow girth <= r
  std::uint64_t path_cap = std::uint64_t{1} << 26;
};

template <class Rng>
InapproxPair random_inapprox_pair(const ParamSet& p, const SimpleGraph& base, Rng& rng, const PairOptions& opt = {}) {
  if (p.m == 0 || p.m > kMaxGf2Dim || p.ell > p.m) throw InvalidParameter("need 0 <= ell <= m <= 64");
  if (p.ell > 24) throw SizeError("bundles of 2^ell constraints are not desk-scale");
  if (base.regular_degree() != std::optional<std::size_t>(p.d))
    throw PreconditionError("base graph is not " + std::to_string(p.d) + "-regular");
  const unsigned m = static_cast<unsigned>(p.m);
  InapproxPair out{base, p, {}, {}, {}, GroupUgInstance(m), GroupUgInstance(m), GroupUgInstance(m), GroupUgInstance(m), {}};
  auto girth = base.girth();
  const std::uint64_t need = (opt.k + 1) * (opt.k + 1) * p.r;
  if (girth && *girth < need)
    out.warnings.push_back("girth " + std::to_string(*girth) + " is below (k+1)^2 r = " + std::to_string(need));
  if (girth && *girth <= p.r && !opt.girth_override)
    throw PreconditionError("girth " + std::to_string(*girth) + " <= r; pass the girth override to proceed");
  for (std::size_t e = 0; e < base.edge_count(); ++e) {
    out.b.push_back(random_vector(m, rng));
    out.z.push_back(random_subspace(m, static_cast<unsigned>(p.ell), rng));
  }
  out.good = good_edges(base, out.z, p.r, m, opt.path_cap);
  detail::fill_pair_instances(out);
  return out;
}

// ---------------------------------------------------------------------------
// Parameter calculator

namespace detail {

using Real50 = boost::multiprecision::cpp_bin_float_50;

inline Real50 to_real(const ExactRatio& x) {
  return Real50(boost::multiprecision::numerator(x)) / Real50(boost::multiprecision::denominator(x));
}

inline constexpr double kGuardBand = 1e-12;

/// Ceiling that refuses to decide when x is within the guard band of an integer.
inline std::uint64_t guarded_ceil(const Real50& x, const char* what) {
  Real50 r = boost::multiprecision::round(x);
  if (boost::multiprecision::abs(x - r) < kGuardBand)
    throw PreconditionError(std::string(what) + " lies within the guard band of an integer");
  return boost::multiprecision::ceil(x).convert_to<std::uint64_t>();
}

}  // namespace detail

/// Slack d - (16/alpha^2)(ln d + 2 + ln 2 - ln epsilon); d is admissible when it is >= 0.
inline detail::Real50 degree_slack(std::uint64_t d, const ExactRatio& alpha, const ExactRatio& epsilon) {
  using detail::Real50;
  Real50 a = detail::to_real(alpha);
  return Real50(d) - Real50(16) / (a * a) *
                         (boost::multiprecision::log(Real50(d)) + 2 + boost::multiprecision::log(Real50(2)) -
                          boost::multiprecision::log(detail::to_real(epsilon)));
}

/// Least d with nonnegative slack and d > 4/((1-2 gamma) alpha), then the ceiling formulas.
/// The slack decreases up to 16/alpha^2 and increases after it, and is negative at d = 5,
/// so the least admissible d is found by bisection on the increasing branch.
inline ParamSet compute_params(const ExactRatio& alpha, const ExactRatio& gamma = ratio(1, 4),
                               const ExactRatio& epsilon = ratio(1, 4)) {
  using detail::Real50;
  if (alpha <= 0 || alpha > 1) throw InvalidParameter("alpha must lie in (0,1]");
  if (gamma <= 0 || gamma >= ratio(1, 2)) throw InvalidParameter("gamma must lie in (0,1/2)");
  if (epsilon <= 0 || epsilon >= ratio(1, 2)) throw InvalidParameter("epsilon must lie in (0,1/2)");
  auto slack = [&](std::uint64_t d) {
    Real50 s = degree_slack(d, alpha, epsilon);
    if (boost::multiprecision::abs(s) < detail::kGuardBand)
      throw PreconditionError("degree inequality at d = " + std::to_string(d) + " lies within the guard band");
    return s;
  };
  const ExactRatio turn = ExactRatio(16) / (alpha * alpha);
  std::uint64_t lo = std::max<std::uint64_t>(
      5, (boost::multiprecision::numerator(turn) / boost::multiprecision::denominator(turn)).convert_to<std::uint64_t>());
  if (slack(lo) >= 0) throw PreconditionError("degree inequality holds at its turning point");
  std::uint64_t hi = lo;
  while (slack(hi) < 0) hi *= 2;
  while (hi - lo > 1) {  // slack(lo) < 0 <= slack(hi)
    std::uint64_t mid = lo + (hi - lo) / 2;
    (slack(mid) < 0 ? lo : hi) = mid;
  }
  std::uint64_t d = hi;
  const ExactRatio bound = ExactRatio(4) / ((1 - 2 * gamma) * alpha);
  while (ExactRatio(d) <= bound) ++d;

  ParamSet p;
  p.alpha = alpha, p.gamma = gamma, p.epsilon = epsilon, p.d = d;
  const Real50 ln2 = boost::multiprecision::log(Real50(2));
  const Real50 log2e = 1 / ln2;
  p.ell = detail::guarded_ceil(boost::multiprecision::log(Real50(d)) / ln2 + 2 * log2e, "ell");
  Real50 inner = (Real50(1) / 2 - detail::to_real(gamma)) * detail::to_real(alpha) - Real50(2) / Real50(d);
  if (inner <= 0) throw PreconditionError("(1/2 - gamma) alpha - 2/d is not positive");
  p.m = detail::guarded_ceil(Real50(p.ell) - boost::multiprecision::log(inner) / ln2, "m");
  p.r = detail::guarded_ceil(Real50(p.m) * ln2 - boost::multiprecision::log(detail::to_real(gamma)), "r");
  if (p.m >= 64) throw SizeError("q = 2^m does not fit in 64 bits");
  p.q = std::uint64_t{1} << p.m;
  return p;
}

}  // namespace symcsp
