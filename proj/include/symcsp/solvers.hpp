// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "symcsp/error.hpp"
#include "symcsp/instances.hpp"

namespace symcsp {

struct BruteOptions {
  bool fix_root = true;                        // group instances only
  std::uint64_t budget = std::uint64_t{1} << 28;  // enumerated assignments
};

template <class Label>
struct OptResult {
  EvalResult eval;
  std::vector<Label> witness;
};

namespace detail {

/// x_a + x_b in D, over labels 0..2^m-1.
struct XorRelation {
  std::vector<std::uint32_t> diffs;
  template <class F>
  void partners_of_a(std::uint32_t x, F&& f) const {
    for (auto z : diffs) f(x ^ z);
  }
  template <class F>
  void partners_of_b(std::uint32_t y, F&& f) const {
    for (auto z : diffs) f(y ^ z);
  }
  bool holds(std::uint32_t x, std::uint32_t y) const {
    return std::find(diffs.begin(), diffs.end(), x ^ y) != diffs.end();
  }
};

/// x_a == perm[x_b].
struct PermRelation {
  std::vector<std::uint32_t> perm, inv;
  template <class F>
  void partners_of_a(std::uint32_t x, F&& f) const {
    f(inv[x]);
  }
  template <class F>
  void partners_of_b(std::uint32_t y, F&& f) const {
    f(perm[y]);
  }
  bool holds(std::uint32_t x, std::uint32_t y) const { return x == perm[y]; }
};

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

/// Largest independent set of a graph on <= 64 vertices by branch and bound.
inline std::uint64_t max_independent_set(const std::vector<std::uint64_t>& adj) {
  const std::size_t n = adj.size();
  std::uint64_t best = 0;
  auto rec = [&](auto&& self, std::uint64_t cand, std::uint64_t cur) -> void {
    if (std::popcount(cur) + std::popcount(cand) <= std::popcount(best)) return;
    if (cand == 0) {
      best = cur;
      return;
    }
    // Vertices of degree <= 1 within cand are always safe to take.
    for (std::uint64_t c = cand; c; c &= c - 1) {
      int v = std::countr_zero(c);
      if (std::popcount(adj[v] & cand) <= 1) {
        self(self, cand & ~adj[v] & ~(std::uint64_t{1} << v), cur | (std::uint64_t{1} << v));
        return;
      }
    }
    int pick = -1, deg = -1;
    for (std::uint64_t c = cand; c; c &= c - 1) {
      int v = std::countr_zero(c);
      int d = std::popcount(adj[v] & cand);
      if (d > deg) deg = d, pick = v;
    }
    std::uint64_t bit = std::uint64_t{1} << pick;
    self(self, cand & ~adj[pick] & ~bit, cur | bit);
    self(self, cand & ~bit, cur);
  };
  std::uint64_t all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  rec(rec, all, 0);
  (void)n;
  return best;
}

/// Exact maximizer for pairwise constraint systems. Only a vertex cover is enumerated;
/// every vertex of the complementary independent set picks its best label given the
/// cover, which is exact because such vertices only interact with the cover.
template <class Rel>
class PairwiseMaximizer {
 public:
  struct Arc {
    std::size_t a, b;
    Rel rel;
  };

  PairwiseMaximizer(std::size_t n, std::uint32_t domain, std::vector<Arc> arcs)
      : n_(n), dom_(domain), arcs_(std::move(arcs)) {}

  /// roots: per vertex, true if its label may be fixed to 0 (shift symmetry).
  void set_rootable(bool v) { rootable_ = v; }

  std::pair<std::uint64_t, std::vector<std::uint32_t>> solve(std::uint64_t budget) {
    choose_cover();
    std::uint64_t space = 1;
    {
      std::size_t free_cover = cover_.size() - fixed_count_;
      space = saturating_pow(dom_, free_cover);
    }
    if (space > budget)
      throw SizeError("brute-force search space " + std::to_string(space) + " exceeds budget " +
                      std::to_string(budget));
    prepare();
    val_.assign(n_, 0);
    best_ = 0;
    best_assignment_.assign(n_, 0);
    have_best_ = false;
    sat_cover_ = 0;
    dfs(0);
    return {best_, best_assignment_};
  }

 private:
  void choose_cover() {
    in_cover_.assign(n_, true);
    std::vector<bool> self_loop(n_, false);
    for (auto& e : arcs_)
      if (e.a == e.b) self_loop[e.a] = true;
    if (n_ <= 48) {
      std::vector<std::uint64_t> adj(n_, 0);
      for (auto& e : arcs_)
        if (e.a != e.b) {
          adj[e.a] |= std::uint64_t{1} << e.b;
          adj[e.b] |= std::uint64_t{1} << e.a;
        }
      std::uint64_t looped = 0;
      for (std::size_t v = 0; v < n_; ++v)
        if (self_loop[v]) looped |= std::uint64_t{1} << v;
      // Self-looped vertices must stay in the cover.
      std::vector<std::uint64_t> adj2 = adj;
      auto is = max_independent_set_excluding(adj2, looped);
      for (std::size_t v = 0; v < n_; ++v)
        if ((is >> v) & 1u) in_cover_[v] = false;
    } else {
      std::vector<std::size_t> deg(n_, 0);
      std::vector<std::vector<std::size_t>> nb(n_);
      for (auto& e : arcs_)
        if (e.a != e.b) nb[e.a].push_back(e.b), nb[e.b].push_back(e.a);
      std::vector<std::size_t> order(n_);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return nb[x].size() < nb[y].size(); });
      std::vector<bool> blocked(n_, false);
      for (auto v : order) {
        if (blocked[v] || self_loop[v]) continue;
        in_cover_[v] = false;
        blocked[v] = true;
        for (auto w : nb[v]) blocked[w] = true;
      }
    }
    cover_.clear();
    indep_.clear();
    for (std::size_t v = 0; v < n_; ++v) (in_cover_[v] ? cover_ : indep_).push_back(v);
    fixed_.assign(n_, false);
    fixed_count_ = 0;
    if (rootable_) {
      // One fixed cover vertex per connected component that contains an arc.
      std::vector<std::size_t> comp(n_);
      std::iota(comp.begin(), comp.end(), 0);
      auto find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
      };
      for (auto& e : arcs_) comp[find(e.a)] = find(e.b);
      std::vector<bool> done(n_, false);
      for (auto v : cover_) {
        auto r = find(v);
        if (done[r]) continue;
        done[r] = true;
        fixed_[v] = true;
        ++fixed_count_;
      }
    }
  }

  static std::uint64_t max_independent_set_excluding(std::vector<std::uint64_t>& adj, std::uint64_t excluded) {
    // Excluded vertices get a neighbour to every other vertex so they never help.
    const std::size_t n = adj.size();
    if (excluded == 0) return max_independent_set(adj);
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    std::vector<std::uint64_t> restricted(adj);
    for (std::size_t v = 0; v < n; ++v) {
      if ((excluded >> v) & 1u) restricted[v] = all & ~(std::uint64_t{1} << v);
      else restricted[v] |= excluded;
    }
    auto is = max_independent_set(restricted);
    return is & ~excluded;
  }

  void prepare() {
    pos_.assign(n_, 0);
    for (std::size_t i = 0; i < cover_.size(); ++i) pos_[cover_[i]] = i;
    // Arcs become "due" when their later cover endpoint is assigned.
    due_.assign(cover_.size(), {});
    loops_.assign(cover_.size(), {});
    to_indep_.assign(cover_.size(), {});
    std::vector<std::size_t> cc_after(cover_.size() + 1, 0);
    indep_slot_.assign(n_, 0);
    for (std::size_t i = 0; i < indep_.size(); ++i) indep_slot_[indep_[i]] = i;
    pending_indep_.assign(indep_.size(), std::vector<std::size_t>(cover_.size() + 1, 0));
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
      auto& e = arcs_[k];
      if (e.a == e.b) {
        loops_[pos_[e.a]].push_back(k);
      } else if (in_cover_[e.a] && in_cover_[e.b]) {
        due_[std::max(pos_[e.a], pos_[e.b])].push_back(k);
        cc_after[std::max(pos_[e.a], pos_[e.b])] += 1;
      } else {
        std::size_t c = in_cover_[e.a] ? e.a : e.b;
        to_indep_[pos_[c]].push_back(k);
        std::size_t w = in_cover_[e.a] ? e.b : e.a;
        pending_indep_[indep_slot_[w]][pos_[c]] += 1;
      }
    }
    // Suffix sums: arcs still undecided once positions < i are assigned.
    remaining_cc_.assign(cover_.size() + 1, 0);
    for (std::size_t i = cover_.size(); i-- > 0;) {
      remaining_cc_[i] = remaining_cc_[i + 1] + cc_after[i] + loops_[i].size();
    }
    for (auto& p : pending_indep_)
      for (std::size_t i = cover_.size(); i-- > 0;) p[i] += p[i + 1];
    cnt_.assign(indep_.size() * dom_, 0);
  }

  std::uint64_t indep_best(std::size_t slot) const {
    std::uint32_t m = 0;
    const std::uint32_t* row = &cnt_[slot * dom_];
    for (std::uint32_t y = 0; y < dom_; ++y) m = std::max(m, row[y]);
    return m;
  }

  void apply_indep(std::size_t i, std::uint32_t x, int sign) {
    for (auto k : to_indep_[i]) {
      auto& e = arcs_[k];
      if (in_cover_[e.a]) {
        std::uint32_t* row = &cnt_[indep_slot_[e.b] * dom_];
        e.rel.partners_of_a(x, [&](std::uint32_t y) { row[y] += sign; });
      } else {
        std::uint32_t* row = &cnt_[indep_slot_[e.a] * dom_];
        e.rel.partners_of_b(x, [&](std::uint32_t y) { row[y] += sign; });
      }
    }
  }

  void dfs(std::size_t i) {
    if (i == cover_.size()) {
      std::uint64_t total = sat_cover_;
      for (std::size_t s = 0; s < indep_.size(); ++s) total += indep_best(s);
      if (!have_best_ || total > best_) {
        have_best_ = true;
        best_ = total;
        for (auto v : cover_) best_assignment_[v] = val_[v];
        for (std::size_t s = 0; s < indep_.size(); ++s) {
          const std::uint32_t* row = &cnt_[s * dom_];
          std::uint32_t arg = 0;
          for (std::uint32_t y = 1; y < dom_; ++y)
            if (row[y] > row[arg]) arg = y;
          best_assignment_[indep_[s]] = arg;
        }
      }
      return;
    }
    if (have_best_) {
      std::uint64_t ub = sat_cover_ + remaining_cc_[i];
      for (std::size_t s = 0; s < indep_.size(); ++s) ub += indep_best(s) + pending_indep_[s][i];
      if (ub <= best_) return;
    }
    const std::size_t v = cover_[i];
    const std::uint32_t limit = fixed_[v] ? 1 : dom_;
    for (std::uint32_t x = 0; x < limit; ++x) {
      val_[v] = x;
      std::uint64_t gained = 0;
      for (auto k : due_[i]) {
        auto& e = arcs_[k];
        if (e.rel.holds(val_[e.a], val_[e.b])) ++gained;
      }
      for (auto k : loops_[i])
        if (arcs_[k].rel.holds(x, x)) ++gained;
      sat_cover_ += gained;
      apply_indep(i, x, +1);
      dfs(i + 1);
      apply_indep(i, x, -1);
      sat_cover_ -= gained;
    }
  }

  std::size_t n_;
  std::uint32_t dom_;
  std::vector<Arc> arcs_;
  bool rootable_ = false;
  std::vector<bool> in_cover_, fixed_;
  std::size_t fixed_count_ = 0;
  std::vector<std::size_t> cover_, indep_, pos_, indep_slot_;
  std::vector<std::vector<std::size_t>> due_, loops_, to_indep_;
  std::vector<std::vector<std::size_t>> pending_indep_;
  std::vector<std::size_t> remaining_cc_;
  std::vector<std::uint32_t> cnt_;
  std::vector<std::uint32_t> val_;
  std::uint64_t best_ = 0, sat_cover_ = 0;
  bool have_best_ = false;
  std::vector<std::uint32_t> best_assignment_;
};

}  // namespace detail

/// Exact maximum. With fix_root, one vertex per connected component is pinned to 0;
/// this is lossless because adding a constant to a whole component preserves every
/// group constraint.
inline OptResult<Gf2Vector> brute_force_opt(const GroupUgInstance& inst, const BruteOptions& opt = {}) {
  if (inst.m() > 20) throw SizeError("label group too large for brute force");
  const auto dom = static_cast<std::uint32_t>(1u << inst.m());
  std::vector<detail::PairwiseMaximizer<detail::XorRelation>::Arc> arcs;
  for (auto& b : inst.bundles()) {
    detail::XorRelation rel;
    for (auto& z : b.diffs) rel.diffs.push_back(static_cast<std::uint32_t>(z.bits()));
    arcs.push_back({b.u, b.v, std::move(rel)});
  }
  detail::PairwiseMaximizer<detail::XorRelation> search(inst.vertex_count(), dom, std::move(arcs));
  search.set_rootable(opt.fix_root);
  auto [best, labels] = search.solve(opt.budget);
  OptResult<Gf2Vector> r;
  r.eval = make_eval(best, inst.constraint_count());
  for (auto x : labels) r.witness.emplace_back(inst.m(), x);
  return r;
}

inline OptResult<std::uint32_t> brute_force_opt(const PermUgInstance& inst, const BruteOptions& opt = {}) {
  std::vector<detail::PairwiseMaximizer<detail::PermRelation>::Arc> arcs;
  for (auto& c : inst.constraints()) {
    detail::PermRelation rel;
    rel.perm = c.perm;
    rel.inv.assign(c.perm.size(), 0);
    for (std::uint32_t j = 0; j < c.perm.size(); ++j) rel.inv[c.perm[j]] = j;
    arcs.push_back({c.u, c.v, std::move(rel)});
  }
  detail::PairwiseMaximizer<detail::PermRelation> search(inst.vertex_count(), inst.q(), std::move(arcs));
  auto [best, labels] = search.solve(opt.budget);
  return {make_eval(best, inst.constraint_count()), labels};
}

struct PropagationResult {
  bool satisfiable = false;
  LabelAssignment witness;  // empty unless satisfiable
};

/// Per component, tries root labels 0..q-1 and forces every other label along constraints.
inline PropagationResult propagate_complete_sat(const PermUgInstance& inst) {
  const std::size_t n = inst.vertex_count();
  const std::uint32_t q = inst.q();
  struct Inc {
    std::size_t c;
    bool as_u;
  };
  std::vector<std::vector<Inc>> inc(n);
  std::vector<std::vector<std::uint32_t>> inv;
  for (std::size_t k = 0; k < inst.constraints().size(); ++k) {
    auto& c = inst.constraints()[k];
    inc[c.u].push_back({k, true});
    if (c.v != c.u) inc[c.v].push_back({k, false});
    std::vector<std::uint32_t> iv(q);
    for (std::uint32_t j = 0; j < q; ++j) iv[c.perm[j]] = j;
    inv.push_back(std::move(iv));
  }
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  LabelAssignment label(n, unset);
  std::vector<bool> done(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (done[s]) continue;
    std::vector<std::size_t> members;
    {
      std::vector<std::size_t> stack{s};
      done[s] = true;
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        members.push_back(x);
        for (auto& e : inc[x]) {
          auto& c = inst.constraints()[e.c];
          auto y = e.as_u ? c.v : c.u;
          if (!done[y]) done[y] = true, stack.push_back(y);
        }
      }
    }
    bool ok = false;
    for (std::uint32_t root = 0; root < q && !ok; ++root) {
      for (auto v : members) label[v] = unset;
      label[s] = root;
      std::queue<std::size_t> bfs;
      bfs.push(s);
      ok = true;
      while (!bfs.empty() && ok) {
        auto x = bfs.front();
        bfs.pop();
        for (auto& e : inc[x]) {
          auto& c = inst.constraints()[e.c];
          std::size_t y = e.as_u ? c.v : c.u;
          std::uint32_t want = e.as_u ? inv[e.c][label[x]] : c.perm[label[x]];
          if (label[y] == unset) {
            label[y] = want;
            bfs.push(y);
          } else if (label[y] != want) {
            ok = false;
            break;
          }
        }
      }
    }
    if (!ok) return {false, {}};
  }
  return {true, label};
}

namespace detail {

/// Determinant by fraction-free Gaussian elimination.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace detail

/// Sum over spanning trees of the product of bundle sizes (weighted matrix-tree theorem).
inline BigInt spanning_tree_work(const GroupUgInstance& inst) {
  const std::size_t n = inst.vertex_count();
  if (n <= 1) return 1;
  std::vector<std::vector<BigInt>> lap(n - 1, std::vector<BigInt>(n - 1, 0));
  for (auto& b : inst.bundles()) {
    BigInt w = b.diffs.size();
    if (b.u < n - 1) lap[b.u][b.u] += w;
    if (b.v < n - 1) lap[b.v][b.v] += w;
    if (b.u < n - 1 && b.v < n - 1) {
      lap[b.u][b.v] -= w;
      lap[b.v][b.u] -= w;
    }
  }
  return detail::bareiss_determinant(std::move(lap));
}

/// Exact optimum by enumerating spanning trees and one difference per tree edge, with
/// the first vertex pinned to 0.
inline OptResult<Gf2Vector> spanning_tree_opt(const GroupUgInstance& inst,
                                              std::uint64_t budget = std::uint64_t{1} << 24) {
  const std::size_t n = inst.vertex_count();
  if (n == 0) return {make_eval(0, 0), {}};
  if (!inst.constraint_graph().is_connected()) throw PreconditionError("spanning-tree oracle needs a connected instance");
  BigInt work = spanning_tree_work(inst);
  if (work > budget) throw SizeError("spanning-tree enumeration of " + work.str() + " paths exceeds budget");

  const auto& bundles = inst.bundles();
  const unsigned m = inst.m();
  std::uint64_t best = 0;
  bool have = false;
  GroupAssignment best_x(n, Gf2Vector::zero(m));
  GroupAssignment x(n, Gf2Vector::zero(m));
  std::vector<std::size_t> chosen;

  auto evaluate_tree = [&]() {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, bundle)
    for (auto k : chosen) {
      adj[bundles[k].u].push_back({bundles[k].v, k});
      adj[bundles[k].v].push_back({bundles[k].u, k});
    }
    std::vector<std::size_t> pick(chosen.size(), 0);
    std::vector<std::size_t> slot(bundles.size(), 0);
    for (std::size_t i = 0; i < chosen.size(); ++i) slot[chosen[i]] = i;
    while (true) {
      std::vector<bool> seen(n, false);
      x[0] = Gf2Vector::zero(m);
      seen[0] = true;
      std::vector<std::size_t> stack{0};
      while (!stack.empty()) {
        auto a = stack.back();
        stack.pop_back();
        for (auto [b, k] : adj[a])
          if (!seen[b]) {
            seen[b] = true;
            x[b] = x[a] + bundles[k].diffs[pick[slot[k]]];
            stack.push_back(b);
          }
      }
      auto s = count_satisfied(inst, x);
      if (!have || s > best) {
        have = true;
        best = s;
        best_x = x;
      }
      std::size_t i = 0;
      while (i < chosen.size() && ++pick[i] == bundles[chosen[i]].diffs.size()) pick[i++] = 0;
      if (i == chosen.size()) break;
    }
  };

  std::vector<std::size_t> parent(n);
  auto rec = [&](auto&& self, std::size_t k, std::vector<std::size_t> dsu) -> void {
    if (chosen.size() == n - 1) {
      evaluate_tree();
      return;
    }
    if (k == bundles.size() || bundles.size() - k < (n - 1) - chosen.size()) return;
    auto find = [&](std::size_t a) {
      while (dsu[a] != a) a = dsu[a];
      return a;
    };
    auto ru = find(bundles[k].u), rv = find(bundles[k].v);
    if (ru != rv) {
      auto next = dsu;
      next[ru] = rv;
      chosen.push_back(k);
      self(self, k + 1, std::move(next));
      chosen.pop_back();
    }
    self(self, k + 1, std::move(dsu));
  };
  std::iota(parent.begin(), parent.end(), 0);
  rec(rec, 0, parent);
  return {make_eval(best, inst.constraint_count()), best_x};
}

struct CspOptResult {
  ExactRatio value = 0;
  LabelAssignment witness;
};

inline CspOptResult csp_brute_opt(const WeightedCspInstance& inst, std::uint64_t budget = std::uint64_t{1} << 24) {
  const std::size_t n = inst.variable_count();
  const std::uint32_t q = inst.q();
  if (detail::saturating_pow(q, n) > budget) throw SizeError("CSP brute force exceeds budget");
  LabelAssignment a(n, 0);
  CspOptResult best{csp_value(inst, a), a};
  while (true) {
    std::size_t i = n;
    while (i > 0 && ++a[i - 1] == q) a[--i] = 0;
    if (i == 0) break;
    auto v = csp_value(inst, a);
    if (v > best.value) best = {v, a};
  }
  return best;
}

}  // namespace symcsp
