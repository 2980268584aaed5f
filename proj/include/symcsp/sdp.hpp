// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <json.hpp>

#include "symcsp/error.hpp"
#include "symcsp/graph.hpp"
#include "symcsp/instances.hpp"
#include "symcsp/rational.hpp"
#include "symcsp/solvers.hpp"

namespace symcsp {

// ---------------------------------------------------------------------------
// Instances

enum class Sense { Eq, Le };

/// Entry of a symmetric matrix, stored once with i <= j.
struct SdpEntry {
  std::size_t i = 0, j = 0;
  double value = 0;
};

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double bound = 0;
  Sense sense = Sense::Eq;
};

struct SdpBlock {
  std::size_t size = 0;
  bool diagonal = false;
};

/// maximize <C, X> + constant subject to <A_k, X> (= or <=) b_k, X block-diagonal PSD.
struct SdpInstance {
  std::size_t n = 0;
  std::vector<SdpBlock> blocks;
  std::vector<SdpEntry> objective;
  double constant = 0;
  std::vector<SdpConstraint> constraints;

  void validate() const {
    std::size_t total = 0;
    for (auto& b : blocks) total += b.size;
    if (total != n) throw InvalidParameter("block sizes do not add up to n");
    auto check = [&](const std::vector<SdpEntry>& es) {
      for (auto& e : es)
        if (e.i > e.j || e.j >= n || !std::isfinite(e.value)) throw InvalidParameter("bad SDP matrix entry");
    };
    check(objective);
    for (auto& c : constraints) check(c.entries);
  }
};

/// <A, X> for a symmetric A given by its upper triangle.
inline double inner(const std::vector<SdpEntry>& a, const Eigen::MatrixXd& x) {
  double s = 0;
  for (auto& e : a) s += (e.i == e.j ? 1.0 : 2.0) * e.value * x(e.i, e.j);
  return s;
}

inline SdpInstance single_block(std::size_t n) {
  SdpInstance s;
  s.n = n;
  if (n) s.blocks.push_back({n, false});
  return s;
}

// ---------------------------------------------------------------------------
// Low-rank solver

struct SdpSolution {
  Eigen::MatrixXd factor;  // p x n_dense, column i is v_i
  Eigen::MatrixXd gram;    // full n x n, zero across blocks
  double value = 0;
  double residual = 0;
  double spread = 0;
  std::size_t restarts = 0;
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  std::vector<double> restart_values;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, SdpSolution best) : Error(what), best_(std::move(best)) {}
  const SdpSolution& best() const noexcept { return best_; }

 private:
  SdpSolution best_;
};

struct SdpOptions {
  double tol = 1e-6;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  std::size_t max_outer = 60;
  int max_inner = 2000;
  std::size_t rank = 0;  // 0 picks the default
};

namespace detail {

/// Variable layout: one factor column per dense-block index, one scalar per diagonal-block
/// index (X_ii = y_i^2), one slack per inequality (s_k^2).
struct SdpLayout {
  std::size_t p = 1;
  std::vector<long> dense_pos;  // -1 when the index lives in a diagonal block
  std::vector<long> diag_pos;
  std::vector<std::size_t> block_of;
  std::size_t n_dense = 0, n_diag = 0, n_slack = 0;

  SdpLayout(const SdpInstance& inst, std::size_t rank) {
    dense_pos.assign(inst.n, -1);
    diag_pos.assign(inst.n, -1);
    block_of.assign(inst.n, 0);
    std::size_t at = 0;
    for (std::size_t b = 0; b < inst.blocks.size(); ++b)
      for (std::size_t t = 0; t < inst.blocks[b].size; ++t, ++at) {
        block_of[at] = b;
        if (inst.blocks[b].diagonal) diag_pos[at] = static_cast<long>(n_diag++);
        else dense_pos[at] = static_cast<long>(n_dense++);
      }
    for (auto& c : inst.constraints) n_slack += c.sense == Sense::Le;
    if (rank) p = rank;
    else {
      std::size_t m = std::max<std::size_t>(inst.constraints.size(), 1);
      p = std::min<std::size_t>(std::max<std::size_t>(n_dense, 1),
                                static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * double(m)))) + 1);
    }
  }
  std::size_t size() const { return p * n_dense + n_diag + n_slack; }
};

/// Term of one constraint or the objective, resolved against the layout.
struct Term {
  enum Kind { Dense, Diag } kind;
  std::size_t a, b;  // dense columns, or the diagonal slot in a
  double coef;       // multiplies v_a . v_b or y_a^2
};

struct Row {
  std::vector<Term> terms;
  long slack = -1;
  double bound = 0;
};

inline Row resolve(const SdpLayout& L, const std::vector<SdpEntry>& es) {
  Row r;
  for (auto& e : es) {
    if (L.dense_pos[e.i] >= 0 && L.dense_pos[e.j] >= 0) {
      if (L.block_of[e.i] != L.block_of[e.j]) continue;
      r.terms.push_back({Term::Dense, std::size_t(L.dense_pos[e.i]), std::size_t(L.dense_pos[e.j]),
                         (e.i == e.j ? 1.0 : 2.0) * e.value});
    } else if (e.i == e.j) {
      r.terms.push_back({Term::Diag, std::size_t(L.diag_pos[e.i]), 0, e.value});
    }
    // Off-diagonal entries of diagonal blocks and cross-block entries are identically zero.
  }
  return r;
}

struct SdpProblem {
  const SdpLayout* L;
  Row objective;
  std::vector<Row> rows;
  std::vector<double> lambda;
  double sigma = 10;

  double eval_row(const Row& r, const double* x) const {
    const std::size_t p = L->p;
    const double* y = x + p * L->n_dense;
    double s = 0;
    for (auto& t : r.terms) {
      if (t.kind == Term::Dense) {
        const double* va = x + p * t.a;
        const double* vb = x + p * t.b;
        double d = 0;
        for (std::size_t k = 0; k < p; ++k) d += va[k] * vb[k];
        s += t.coef * d;
      } else {
        s += t.coef * y[t.a] * y[t.a];
      }
    }
    if (r.slack >= 0) {
      double sl = x[p * L->n_dense + L->n_diag + r.slack];
      s += sl * sl;
    }
    return s;
  }

  void add_grad(const Row& r, const double* x, double mult, double* g) const {
    const std::size_t p = L->p;
    const std::size_t yo = p * L->n_dense;
    for (auto& t : r.terms) {
      if (t.kind == Term::Dense) {
        for (std::size_t k = 0; k < p; ++k) {
          g[p * t.a + k] += mult * t.coef * x[p * t.b + k];
          g[p * t.b + k] += mult * t.coef * x[p * t.a + k];
        }
      } else {
        g[yo + t.a] += mult * t.coef * 2 * x[yo + t.a];
      }
    }
    if (r.slack >= 0) {
      std::size_t at = yo + L->n_diag + r.slack;
      g[at] += mult * 2 * x[at];
    }
  }

  /// Augmented Lagrangian of the minimization of -objective.
  double value_and_grad(const double* x, double* g) const {
    const std::size_t nv = L->size();
    if (g) std::fill(g, g + nv, 0.0);
    double f = -eval_row(objective, x);
    if (g) add_grad(objective, x, -1, g);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      double c = eval_row(rows[k], x) - rows[k].bound;
      f += -lambda[k] * c + 0.5 * sigma * c * c;
      if (g) add_grad(rows[k], x, -lambda[k] + sigma * c, g);
    }
    return f;
  }
};

class AlFunction : public ceres::FirstOrderFunction {
 public:
  explicit AlFunction(const SdpProblem* p) : p_(p) {}
  bool Evaluate(const double* x, double* cost, double* grad) const override {
    *cost = p_->value_and_grad(x, grad);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return static_cast<int>(p_->L->size()); }

 private:
  const SdpProblem* p_;
};

/// Largest violation of the original constraints (slacks excluded).
inline double residual_of(const SdpInstance& inst, const Eigen::MatrixXd& x) {
  double r = 0;
  for (auto& c : inst.constraints) {
    double v = inner(c.entries, x) - c.bound;
    r = std::max(r, c.sense == Sense::Eq ? std::abs(v) : std::max(0.0, v));
  }
  return r;
}

inline Eigen::MatrixXd gram_of(const SdpInstance& inst, const SdpLayout& L, const std::vector<double>& x,
                               Eigen::MatrixXd* factor) {
  Eigen::Map<const Eigen::MatrixXd> v(x.data(), static_cast<long>(L.p), static_cast<long>(L.n_dense));
  if (factor) *factor = v;
  Eigen::MatrixXd dense = v.transpose() * v;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<long>(inst.n), static_cast<long>(inst.n));
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (L.diag_pos[i] >= 0) {
      double y = x[L.p * L.n_dense + std::size_t(L.diag_pos[i])];
      g(long(i), long(i)) = y * y;
      continue;
    }
    for (std::size_t j = 0; j < inst.n; ++j)
      if (L.dense_pos[j] >= 0 && L.block_of[i] == L.block_of[j])
        g(long(i), long(j)) = dense(L.dense_pos[i], L.dense_pos[j]);
  }
  return g;
}

}  // namespace detail

/// Burer-Monteiro factorization with an augmented Lagrangian outer loop and L-BFGS inner
/// solves. Reports the best feasible restart.
inline SdpSolution solve_sdp_lowrank(const SdpInstance& inst, const SdpOptions& opt = {}) {
  inst.validate();
  if (opt.restarts == 0) throw InvalidParameter("need at least one restart");
  detail::SdpLayout L(inst, opt.rank);
  detail::SdpProblem prob;
  prob.L = &L;
  prob.objective = detail::resolve(L, inst.objective);
  long slack = 0;
  for (auto& c : inst.constraints) {
    auto r = detail::resolve(L, c.entries);
    r.bound = c.bound;
    if (c.sense == Sense::Le) r.slack = slack++;
    prob.rows.push_back(std::move(r));
  }

  ceres::GradientProblemSolver::Options copt;
  copt.line_search_direction_type = ceres::LBFGS;
  copt.max_num_iterations = opt.max_inner;
  copt.function_tolerance = 1e-15;
  copt.gradient_tolerance = 1e-11;
  copt.parameter_tolerance = 1e-15;
  copt.logging_type = ceres::SILENT;
  copt.minimizer_progress_to_stdout = false;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  SdpSolution best;
  bool have_feasible = false;
  double best_infeasible = std::numeric_limits<double>::infinity();
  std::vector<double> feasible_values;
  for (std::size_t rs = 0; rs < opt.restarts; ++rs) {
    std::vector<double> x(L.size());
    for (auto& xi : x) xi = gauss(rng) / std::sqrt(double(L.p));
    prob.lambda.assign(prob.rows.size(), 0.0);
    prob.sigma = 10;
    ceres::GradientProblem problem(new detail::AlFunction(&prob));
    double last_res = std::numeric_limits<double>::infinity(), last_val = 0;
    Eigen::MatrixXd gram, factor;
    double res = 0, val = 0;
    for (std::size_t outer = 0; outer < opt.max_outer; ++outer) {
      ceres::GradientProblemSolver::Summary summary;
      ceres::Solve(copt, problem, x.data(), &summary);
      for (std::size_t k = 0; k < prob.rows.size(); ++k)
        prob.lambda[k] -= prob.sigma * (prob.eval_row(prob.rows[k], x.data()) - prob.rows[k].bound);
      gram = detail::gram_of(inst, L, x, &factor);
      res = detail::residual_of(inst, gram);
      val = inner(inst.objective, gram) + inst.constant;
      if (res <= opt.tol && std::abs(val - last_val) <= opt.tol * std::max(1.0, std::abs(val))) break;
      if (res > 0.25 * last_res) prob.sigma = std::min(prob.sigma * 10, 1e9);
      last_res = res;
      last_val = val;
    }
    bool feasible = res <= opt.tol;
    if (feasible) feasible_values.push_back(val);
    bool better = feasible ? (!have_feasible || val > best.value) : (!have_feasible && res < best_infeasible);
    if (better) {
      best.factor = factor;
      best.gram = gram;
      best.value = val;
      best.residual = res;
      if (!feasible) best_infeasible = res;
    }
    have_feasible |= feasible;
  }
  best.restarts = opt.restarts;
  best.rank = L.p;
  best.seed = opt.seed;
  best.restart_values = feasible_values;
  if (!feasible_values.empty()) {
    auto [lo, hi] = std::minmax_element(feasible_values.begin(), feasible_values.end());
    best.spread = *hi - *lo;
  }
  if (!have_feasible) throw ConvergenceError("no restart reached the feasibility tolerance", best);
  return best;
}

inline nlohmann::json to_json(const SdpSolution& s) {
  return {{"value", s.value}, {"residual", s.residual}, {"restarts", s.restarts},
          {"seed", s.seed},   {"rank", s.rank},         {"spread", s.spread}};
}

// ---------------------------------------------------------------------------
// MaxCut and Goemans-Williamson

/// maximize 1/2 sum w_ij (1 - X_ij): symmetric C with -w/4 in both (i,j) and (j,i), so
/// <C, X> = -1/2 sum w_ij X_ij, plus the constant sum w / 2.
inline SdpInstance build_maxcut_sdp(const WeightedGraph& g) {
  auto s = single_block(g.graph.vertex_count());
  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    auto& ed = g.graph.edge(e);
    double w = to_double(g.weights.at(e));
    s.objective.push_back({std::min(ed.u, ed.v), std::max(ed.u, ed.v), -w / 4});
    s.constant += w / 2;
  }
  for (std::size_t i = 0; i < s.n; ++i) s.constraints.push_back({{{i, i, 1.0}}, 1.0, Sense::Eq});
  return s;
}

/// 2 theta / (pi (1 - cos theta)).
inline double gw_ratio(double theta) { return 2 * theta / (std::numbers::pi * (1 - std::cos(theta))); }

inline double gw_alpha() {
  static const double alpha = [] {
    auto r = boost::math::tools::brent_find_minima(gw_ratio, 0.5, std::numbers::pi, 40);
    return r.second;
  }();
  return alpha;
}

/// (alpha_GW / 2) sum w_ij (1 - X_ij).
inline double gw_symmetric_value(const SdpSolution& s, const WeightedGraph& g) {
  double sum = 0;
  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    auto& ed = g.graph.edge(e);
    sum += to_double(g.weights[e]) * (1 - s.gram(long(ed.u), long(ed.v)));
  }
  return gw_alpha() / 2 * sum;
}

/// sum w_ij arccos(X_ij) / pi, the expected random-hyperplane cut.
inline double expected_hyperplane_cut(const SdpSolution& s, const WeightedGraph& g) {
  double sum = 0;
  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    auto& ed = g.graph.edge(e);
    sum += to_double(g.weights[e]) * std::acos(std::clamp(s.gram(long(ed.u), long(ed.v)), -1.0, 1.0));
  }
  return sum / std::numbers::pi;
}

struct RoundingStats {
  double mean = 0;
  double stddev = 0;
  std::size_t trials = 0;
};

template <class Rng>
RoundingStats hyperplane_round(const SdpSolution& s, const WeightedGraph& g, Rng& rng, std::size_t trials) {
  if (trials == 0) throw InvalidParameter("need at least one trial");
  const long p = s.factor.rows();
  std::normal_distribution<double> gauss;
  std::vector<double> w;
  for (auto& x : g.weights) w.push_back(to_double(x));
  double sum = 0, sq = 0;
  Eigen::VectorXd h(p);
  for (std::size_t t = 0; t < trials; ++t) {
    for (long k = 0; k < p; ++k) h[k] = gauss(rng);
    Eigen::VectorXd side = s.factor.transpose() * h;
    double cut = 0;
    for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
      auto& ed = g.graph.edge(e);
      if ((side[long(ed.u)] >= 0) != (side[long(ed.v)] >= 0)) cut += w[e];
    }
    sum += cut;
    sq += cut * cut;
  }
  RoundingStats r;
  r.trials = trials;
  r.mean = sum / double(trials);
  r.stddev = trials > 1 ? std::sqrt(std::max(0.0, (sq - double(trials) * r.mean * r.mean) / double(trials - 1))) : 0;
  return r;
}

/// MaxCut as a binary CSP: one "neq" constraint per edge with the edge weight.
inline WeightedCspInstance maxcut_csp(const WeightedGraph& g) {
  WeightedCspInstance c(2);
  for (auto& n : g.graph.names()) c.add_variable(n);
  auto t = c.add_type("neq", 2, {{0, 1}, {1, 0}});
  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    auto& ed = g.graph.edge(e);
    c.apply(t, {ed.u, ed.v}, g.weights[e]);
  }
  return c;
}

// ---------------------------------------------------------------------------
// LC relaxation

enum class Normalization { Weight, Count, None };

inline Normalization parse_normalization(std::string_view s) {
  if (s == "weight") return Normalization::Weight;
  if (s == "count") return Normalization::Count;
  if (s == "none") return Normalization::None;
  throw InvalidParameter("normalization must be weight, count or none");
}

struct Normalized {
  WeightedCspInstance instance;
  ExactRatio factor = 1;  // weight mode: new = factor * old
};

/// Weight mode rescales so the total weight is 1 (sign kept); count mode gives every
/// constraint weight 1/|constraints|.
inline Normalized normalize(const WeightedCspInstance& inst, Normalization mode) {
  Normalized out{inst, 1};
  const auto count = inst.applications().size();
  if (mode == Normalization::None || count == 0) return out;
  if (mode == Normalization::Weight) {
    auto total = inst.total_weight();
    if (total == 0) return out;
    out.factor = 1 / (total < 0 ? ExactRatio(-total) : total);
    out.instance.scale(out.factor);
    return out;
  }
  WeightedCspInstance c(inst.q());
  for (auto& n : inst.names().all()) c.add_variable(n);
  for (auto& t : inst.types()) c.add_type(t.id, t.arity, t.satisfying);
  for (auto& a : inst.applications()) c.apply(a.type, a.vars, ExactRatio(1, count));
  out.instance = std::move(c);
  out.factor = ExactRatio(1, count);
  return out;
}

struct LcLayout {
  std::size_t vector_block = 0;       // |V| * q
  std::vector<std::size_t> mu_start;  // first index of each constraint's distribution
};

/// First block: (i, a) -> <b_{i,a}, b_{j,b}>. Second, diagonal block: mu_P(f). Each
/// constraint P ties every Gram entry over V(P) x V(P) to its marginal and sums to 1.
inline SdpInstance build_lc_relaxation(const WeightedCspInstance& inst, std::size_t max_size = 4096,
                                       LcLayout* layout = nullptr) {
  const std::size_t q = inst.q(), nv = inst.variable_count();
  LcLayout lay;
  lay.vector_block = nv * q;
  std::size_t n = lay.vector_block;
  for (auto& a : inst.applications()) {
    lay.mu_start.push_back(n);
    n += static_cast<std::size_t>(detail::saturating_pow(q, a.vars.size()));
    if (n > max_size) throw SizeError("LC relaxation index set exceeds budget");
  }
  SdpInstance s;
  s.n = n;
  if (lay.vector_block) s.blocks.push_back({lay.vector_block, false});
  if (n > lay.vector_block) s.blocks.push_back({n - lay.vector_block, true});
  auto bidx = [&](std::size_t var, std::size_t a) { return var * q + a; };

  for (std::size_t p = 0; p < inst.applications().size(); ++p) {
    auto& app = inst.applications()[p];
    auto& type = inst.types()[app.type];
    const std::size_t k = app.vars.size();
    const auto fcount = static_cast<std::size_t>(detail::saturating_pow(q, k));
    std::vector<std::vector<std::uint32_t>> fs(fcount, std::vector<std::uint32_t>(k));
    for (std::size_t f = 0; f < fcount; ++f) {
      std::size_t x = f;
      for (std::size_t t = 0; t < k; ++t) fs[f][t] = static_cast<std::uint32_t>(x % q), x /= q;
    }
    double w = to_double(app.weight);
    for (std::size_t f = 0; f < fcount; ++f) {
      auto mu = lay.mu_start[p] + f;
      if (type.accepts(fs[f]) && w != 0) s.objective.push_back({mu, mu, w});
    }
    // Marginals over tuple positions; a repeated variable yields one row per position pair.
    std::set<std::pair<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>> rows;
    for (std::size_t t1 = 0; t1 < k; ++t1)
      for (std::size_t t2 = 0; t2 < k; ++t2)
        for (std::size_t a = 0; a < q; ++a)
          for (std::size_t b = 0; b < q; ++b) {
            auto r = bidx(app.vars[t1], a), c = bidx(app.vars[t2], b);
            if (r > c) continue;
            std::vector<std::size_t> sup;
            for (std::size_t f = 0; f < fcount; ++f)
              if (fs[f][t1] == a && fs[f][t2] == b) sup.push_back(f);
            rows.insert({{r, c}, sup});
          }
    for (auto& [rc, sup] : rows) {
      SdpConstraint c;
      c.entries.push_back({rc.first, rc.second, rc.first == rc.second ? 1.0 : 0.5});
      for (auto f : sup) c.entries.push_back({lay.mu_start[p] + f, lay.mu_start[p] + f, -1.0});
      s.constraints.push_back(std::move(c));
    }
    SdpConstraint norm;
    for (std::size_t f = 0; f < fcount; ++f) norm.entries.push_back({lay.mu_start[p] + f, lay.mu_start[p] + f, 1.0});
    norm.bound = 1;
    s.constraints.push_back(std::move(norm));
  }
  if (layout) *layout = lay;
  return s;
}

// ---------------------------------------------------------------------------
// Gap curve

struct GapTable {
  struct Point {
    double sdp = 0;
    double opt = 0;
  };
  std::vector<Point> points;  // sorted by sdp
  double eta = 0;

  /// max over entries with sdp < c of opt, minus eta; -infinity when nothing qualifies.
  double lookup(double c) const {
    double best = -std::numeric_limits<double>::infinity();
    for (auto& p : points)
      if (p.sdp < c) best = std::max(best, p.opt - eta);
    return best;
  }
  std::vector<std::pair<double, double>> curve(const std::vector<double>& grid) const {
    std::vector<std::pair<double, double>> out;
    for (auto c : grid) out.push_back({c, lookup(c)});
    return out;
  }
};

inline double lc_value(const WeightedCspInstance& inst, const SdpOptions& opt = {}) {
  return solve_sdp_lowrank(build_lc_relaxation(inst), opt).value;
}

inline GapTable gap_curve_estimate(const std::vector<WeightedCspInstance>& family, double eta,
                                   Normalization mode = Normalization::Weight, const SdpOptions& opt = {},
                                   std::uint64_t brute_budget = std::uint64_t{1} << 20) {
  GapTable t;
  t.eta = eta;
  for (auto& inst : family) {
    auto nrm = normalize(inst, mode).instance;
    double opt_value = to_double(csp_brute_opt(nrm, brute_budget).value);
    t.points.push_back({lc_value(nrm, opt), opt_value});
  }
  std::sort(t.points.begin(), t.points.end(), [](auto& a, auto& b) { return a.sdp < b.sdp || (a.sdp == b.sdp && a.opt < b.opt); });
  return t;
}

// ---------------------------------------------------------------------------
// SDPA sparse format

/// Dual form max <F0, Y> s.t. <F_k, Y> = c_k. Inequalities get a trailing diagonal slack
/// block. The objective constant goes in a leading comment.
inline void write_sdpa(std::ostream& out, const SdpInstance& s) {
  s.validate();
  std::size_t slacks = 0;
  for (auto& c : s.constraints) slacks += c.sense == Sense::Le;
  out.precision(17);
  out << "* constant " << s.constant << "\n";
  out << s.constraints.size() << "\n";
  out << s.blocks.size() + (slacks ? 1 : 0) << "\n";
  for (auto& b : s.blocks) out << (b.diagonal ? -long(b.size) : long(b.size)) << " ";
  if (slacks) out << -long(slacks);
  out << "\n";
  for (auto& c : s.constraints) out << c.bound << " ";
  out << "\n";
  std::vector<std::size_t> start, block;
  std::size_t at = 0;
  for (std::size_t b = 0; b < s.blocks.size(); ++b)
    for (std::size_t t = 0; t < s.blocks[b].size; ++t, ++at) start.push_back(at - t), block.push_back(b);
  auto emit = [&](std::size_t mat, const std::vector<SdpEntry>& es) {
    for (auto& e : es) {
      if (block[e.i] != block[e.j] || e.value == 0) continue;
      out << mat << " " << block[e.i] + 1 << " " << e.i - start[e.i] + 1 << " " << e.j - start[e.j] + 1 << " "
          << e.value << "\n";
    }
  };
  emit(0, s.objective);
  std::size_t slack = 0;
  for (std::size_t k = 0; k < s.constraints.size(); ++k) {
    emit(k + 1, s.constraints[k].entries);
    if (s.constraints[k].sense == Sense::Le)
      out << k + 1 << " " << s.blocks.size() + 1 << " " << slack + 1 << " " << slack + 1 << " 1\n", ++slack;
  }
}

/// Reads what write_sdpa writes (and plain SDPA files). Every constraint comes back as an equality.
inline SdpInstance read_sdpa(std::istream& in) {
  SdpInstance s;
  std::string line;
  std::vector<std::string> body;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '"' || line[0] == '*') {
      std::istringstream ls(line);
      std::string star, key;
      if (ls >> star >> key && key == "constant") ls >> s.constant;
      continue;
    }
    for (auto& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    body.push_back(line);
  }
  std::istringstream all([&] {
    std::string joined;
    for (auto& b : body) joined += b + "\n";
    return joined;
  }());
  std::size_t m = 0, nb = 0;
  if (!(all >> m >> nb)) throw ParseError("missing SDPA header", lineno);
  std::vector<std::size_t> start;
  for (std::size_t b = 0; b < nb; ++b) {
    long sz;
    if (!(all >> sz) || sz == 0) throw ParseError("bad SDPA block size", 0);
    start.push_back(s.n);
    s.blocks.push_back({std::size_t(std::labs(sz)), sz < 0});
    s.n += std::size_t(std::labs(sz));
  }
  s.constraints.resize(m);
  for (auto& c : s.constraints)
    if (!(all >> c.bound)) throw ParseError("missing SDPA right-hand side", 0);
  std::size_t mat, blk, i, j;
  double v;
  while (all >> mat >> blk >> i >> j >> v) {
    if (mat > m || blk == 0 || blk > nb || i == 0 || j == 0 || i > s.blocks[blk - 1].size || j > s.blocks[blk - 1].size)
      throw ParseError("SDPA entry out of range", 0);
    SdpEntry e{start[blk - 1] + std::min(i, j) - 1, start[blk - 1] + std::max(i, j) - 1, v};
    (mat == 0 ? s.objective : s.constraints[mat - 1].entries).push_back(e);
  }
  if (!all.eof()) throw ParseError("trailing garbage in SDPA body", 0);
  return s;
}

}  // namespace symcsp
