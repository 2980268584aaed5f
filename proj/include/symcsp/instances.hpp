// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symcsp/error.hpp"
#include "symcsp/gf2.hpp"
#include "symcsp/graph.hpp"
#include "symcsp/rational.hpp"

namespace symcsp {

/// Names <-> dense indices, insertion ordered.
class VertexNames {
 public:
  std::size_t add(std::string name) {
    if (index_.count(name)) throw InvalidParameter("duplicate vertex '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    return names_.size() - 1;
  }
  std::size_t ensure(std::string_view name) {
    if (auto i = find(name)) return *i;
    return add(std::string(name));
  }
  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t at(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw InvalidParameter("unknown vertex '" + std::string(name) + "'");
  }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& all() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  friend bool operator==(const VertexNames& a, const VertexNames& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Allowed differences on one vertex pair; each z stands for x_u + x_v = z.
struct Bundle {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  std::vector<Gf2Vector> diffs;  // sorted, distinct, nonempty
  friend bool operator==(const Bundle&, const Bundle&) = default;
};

using GroupAssignment = std::vector<Gf2Vector>;
using LabelAssignment = std::vector<std::uint32_t>;

/// Group unique games over F_2^m. Bundles on the same unordered pair are merged.
class GroupUgInstance {
 public:
  explicit GroupUgInstance(unsigned m = 1) : m_(m) {
    if (m == 0 || m > kMaxGf2Dim) throw InvalidParameter("m must be in 1..64");
  }

  unsigned m() const noexcept { return m_; }
  std::size_t add_vertex(std::string name) {
    adj_.emplace_back();
    return names_.add(std::move(name));
  }
  std::size_t ensure_vertex(std::string_view name) {
    if (auto i = names_.find(name)) return *i;
    return add_vertex(std::string(name));
  }
  const VertexNames& names() const noexcept { return names_; }
  const std::string& name(std::size_t v) const { return names_.name(v); }
  std::size_t vertex_count() const noexcept { return names_.size(); }

  void add_bundle(std::size_t a, std::size_t b, std::vector<Gf2Vector> diffs) {
    if (a >= vertex_count() || b >= vertex_count()) throw InvalidParameter("bundle endpoint out of range");
    if (a == b) throw InvalidParameter("self-loop bundle on '" + name(a) + "'");
    if (diffs.empty()) throw InvalidParameter("empty bundle");
    for (auto& z : diffs)
      if (z.dim() != m_) throw InvalidParameter("bundle vector has wrong dimension");
    std::size_t u = std::min(a, b), v = std::max(a, b);
    auto it = pair_index_.find(key(u, v));
    if (it == pair_index_.end()) {
      pair_index_.emplace(key(u, v), bundles_.size());
      bundles_.push_back({u, v, {}});
      adj_[u].push_back(v);
      adj_[v].push_back(u);
      it = pair_index_.find(key(u, v));
    }
    auto& d = bundles_[it->second].diffs;
    d.insert(d.end(), diffs.begin(), diffs.end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }

  const std::vector<Bundle>& bundles() const noexcept { return bundles_; }
  const Bundle* bundle_between(std::size_t a, std::size_t b) const {
    if (a == b) return nullptr;
    auto it = pair_index_.find(key(std::min(a, b), std::max(a, b)));
    return it == pair_index_.end() ? nullptr : &bundles_[it->second];
  }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }

  std::uint64_t constraint_count() const {
    std::uint64_t c = 0;
    for (auto& b : bundles_) c += b.diffs.size();
    return c;
  }

  SimpleGraph constraint_graph() const {
    SimpleGraph g;
    for (auto& n : names_.all()) g.add_vertex(n);
    for (auto& b : bundles_) g.add_edge(b.u, b.v);
    return g;
  }

  friend bool operator==(const GroupUgInstance& a, const GroupUgInstance& b) {
    if (a.m_ != b.m_ || !(a.names_ == b.names_) || a.bundles_.size() != b.bundles_.size()) return false;
    for (auto& x : a.bundles_) {
      auto* y = b.bundle_between(x.u, x.v);
      if (!y || y->diffs != x.diffs) return false;
    }
    return true;
  }

 private:
  static std::uint64_t key(std::size_t u, std::size_t v) { return (std::uint64_t(u) << 32) | std::uint64_t(v); }

  unsigned m_;
  VertexNames names_;
  std::vector<Bundle> bundles_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
  std::vector<std::vector<std::size_t>> adj_;
};

struct PermConstraint {
  std::size_t u = 0;
  std::size_t v = 0;
  std::vector<std::uint32_t> perm;  // satisfied iff a(u) == perm[a(v)]
  friend bool operator==(const PermConstraint&, const PermConstraint&) = default;
};

class PermUgInstance {
 public:
  explicit PermUgInstance(std::uint32_t q = 2) : q_(q) {
    if (q == 0) throw InvalidParameter("q must be positive");
  }
  std::uint32_t q() const noexcept { return q_; }
  std::size_t add_vertex(std::string name) { return names_.add(std::move(name)); }
  std::size_t ensure_vertex(std::string_view name) { return names_.ensure(name); }
  const VertexNames& names() const noexcept { return names_; }
  const std::string& name(std::size_t v) const { return names_.name(v); }
  std::size_t vertex_count() const noexcept { return names_.size(); }

  void add_constraint(std::size_t u, std::size_t v, std::vector<std::uint32_t> perm) {
    if (u >= vertex_count() || v >= vertex_count()) throw InvalidParameter("constraint endpoint out of range");
    if (perm.size() != q_) throw InvalidParameter("permutation has wrong length");
    std::vector<bool> seen(q_, false);
    for (auto x : perm) {
      if (x >= q_ || seen[x]) throw InvalidParameter("not a permutation of [q]");
      seen[x] = true;
    }
    constraints_.push_back({u, v, std::move(perm)});
  }
  const std::vector<PermConstraint>& constraints() const noexcept { return constraints_; }
  std::uint64_t constraint_count() const noexcept { return constraints_.size(); }
  friend bool operator==(const PermUgInstance& a, const PermUgInstance& b) {
    return a.q_ == b.q_ && a.names_ == b.names_ && a.constraints_ == b.constraints_;
  }

 private:
  std::uint32_t q_;
  VertexNames names_;
  std::vector<PermConstraint> constraints_;
};

struct ConstraintType {
  std::string id;
  std::size_t arity = 0;
  std::vector<std::vector<std::uint32_t>> satisfying;  // sorted, distinct
  bool accepts(std::span<const std::uint32_t> t) const {
    return std::binary_search(satisfying.begin(), satisfying.end(), std::vector<std::uint32_t>(t.begin(), t.end()));
  }
  friend bool operator==(const ConstraintType&, const ConstraintType&) = default;
};

struct Application {
  std::size_t type = 0;
  std::vector<std::size_t> vars;
  ExactRatio weight;
  friend bool operator==(const Application&, const Application&) = default;
};

/// Weighted CSP over [q]. Applying the same type to the same tuple twice sums the weights.
class WeightedCspInstance {
 public:
  explicit WeightedCspInstance(std::uint32_t q = 2) : q_(q) {
    if (q == 0) throw InvalidParameter("q must be positive");
  }
  std::uint32_t q() const noexcept { return q_; }
  std::size_t add_variable(std::string name) { return names_.add(std::move(name)); }
  std::size_t ensure_variable(std::string_view name) { return names_.ensure(name); }
  const VertexNames& names() const noexcept { return names_; }
  std::size_t variable_count() const noexcept { return names_.size(); }

  std::size_t add_type(std::string id, std::size_t arity, std::vector<std::vector<std::uint32_t>> sat) {
    if (find_type(id)) throw InvalidParameter("duplicate constraint type '" + id + "'");
    if (arity == 0) throw InvalidParameter("arity must be positive");
    for (auto& t : sat) {
      if (t.size() != arity) throw InvalidParameter("tuple length differs from arity in '" + id + "'");
      for (auto x : t)
        if (x >= q_) throw InvalidParameter("tuple value outside [q] in '" + id + "'");
    }
    std::sort(sat.begin(), sat.end());
    sat.erase(std::unique(sat.begin(), sat.end()), sat.end());
    types_.push_back({std::move(id), arity, std::move(sat)});
    return types_.size() - 1;
  }
  std::optional<std::size_t> find_type(std::string_view id) const {
    for (std::size_t i = 0; i < types_.size(); ++i)
      if (types_[i].id == id) return i;
    return std::nullopt;
  }

  void apply(std::size_t type, std::vector<std::size_t> vars, ExactRatio weight) {
    if (type >= types_.size()) throw InvalidParameter("unknown constraint type");
    if (vars.size() != types_[type].arity) throw InvalidParameter("tuple length differs from arity");
    for (auto v : vars)
      if (v >= variable_count()) throw InvalidParameter("variable out of range");
    for (auto& a : apps_)
      if (a.type == type && a.vars == vars) {
        a.weight += weight;
        return;
      }
    apps_.push_back({type, std::move(vars), std::move(weight)});
  }

  const std::vector<ConstraintType>& types() const noexcept { return types_; }
  const std::vector<Application>& applications() const noexcept { return apps_; }
  ExactRatio total_weight() const {
    ExactRatio s = 0;
    for (auto& a : apps_) s += a.weight;
    return s;
  }
  bool is_normalized() const {
    auto s = total_weight();
    return s >= -1 && s <= 1;
  }
  /// Multiplies every weight by `factor`.
  void scale(const ExactRatio& factor) {
    for (auto& a : apps_) a.weight *= factor;
  }
  friend bool operator==(const WeightedCspInstance& a, const WeightedCspInstance& b) {
    return a.q_ == b.q_ && a.names_ == b.names_ && a.types_ == b.types_ && a.apps_ == b.apps_;
  }

 private:
  std::uint32_t q_;
  VertexNames names_;
  std::vector<ConstraintType> types_;
  std::vector<Application> apps_;
};

struct EvalResult {
  std::uint64_t satisfied = 0;
  std::uint64_t total = 0;
  ExactRatio fraction = 1;
  bool vacuous = false;  // zero constraints: fraction reported as 1
};

inline EvalResult make_eval(std::uint64_t sat, std::uint64_t total) {
  EvalResult r;
  r.satisfied = sat;
  r.total = total;
  r.vacuous = total == 0;
  r.fraction = total == 0 ? ExactRatio(1) : ExactRatio(BigInt(sat), BigInt(total));
  return r;
}

namespace detail {
template <class A>
void require_total(const A& a, std::size_t n) {
  if (a.size() != n)
    throw IncompleteAssignment("assignment covers " + std::to_string(a.size()) + " of " + std::to_string(n) +
                               " vertices");
}
}  // namespace detail

inline std::uint64_t count_satisfied(const GroupUgInstance& inst, const GroupAssignment& x) {
  std::uint64_t s = 0;
  for (auto& b : inst.bundles()) {
    auto d = x[b.u] + x[b.v];
    if (std::binary_search(b.diffs.begin(), b.diffs.end(), d)) ++s;
  }
  return s;
}

inline EvalResult evaluate(const GroupUgInstance& inst, const GroupAssignment& x) {
  detail::require_total(x, inst.vertex_count());
  for (auto& g : x)
    if (g.dim() != inst.m()) throw InvalidParameter("assignment label has wrong dimension");
  return make_eval(count_satisfied(inst, x), inst.constraint_count());
}

inline EvalResult evaluate(const PermUgInstance& inst, const LabelAssignment& a) {
  detail::require_total(a, inst.vertex_count());
  for (auto x : a)
    if (x >= inst.q()) throw InvalidParameter("label outside [q]");
  std::uint64_t s = 0;
  for (auto& c : inst.constraints())
    if (a[c.u] == c.perm[a[c.v]]) ++s;
  return make_eval(s, inst.constraint_count());
}

inline ExactRatio csp_value(const WeightedCspInstance& inst, const LabelAssignment& a) {
  detail::require_total(a, inst.variable_count());
  ExactRatio v = 0;
  std::vector<std::uint32_t> t;
  for (auto& app : inst.applications()) {
    t.clear();
    for (auto x : app.vars) t.push_back(a[x]);
    if (inst.types()[app.type].accepts(t)) v += app.weight;
  }
  return v;
}

/// Resolves a name-keyed partial map into a total assignment.
template <class Label, class Instance>
std::vector<Label> resolve_assignment(const Instance& inst, const std::map<std::string, Label>& labels) {
  std::vector<Label> out;
  const auto& names = inst.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = labels.find(names.name(i));
    if (it == labels.end()) throw IncompleteAssignment("no label for vertex '" + names.name(i) + "'");
    out.push_back(it->second);
  }
  for (auto& [n, _] : labels)
    if (!names.find(n)) throw InvalidParameter("assignment names unknown vertex '" + n + "'");
  return out;
}

}  // namespace symcsp
