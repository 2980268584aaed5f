// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "symcsp/sdp.hpp"

using namespace symcsp;

namespace {

constexpr double kTol = 1e-4;

WeightedGraph unit_graph(SimpleGraph g) { return WeightedGraph::unit(std::move(g)); }

WeightedGraph single_edge() {
  SimpleGraph g(2);
  g.add_edge(0, 1);
  return unit_graph(g);
}

double min_eigenvalue(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  return es.eigenvalues().minCoeff();
}

WeightedCspInstance random_csp(std::mt19937_64& rng) {
  WeightedCspInstance c(2);
  std::size_t n = 2 + rng() % 3;
  for (std::size_t i = 0; i < n; ++i) c.add_variable("x" + std::to_string(i));
  std::vector<std::vector<std::uint32_t>> all2{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int t = 0; t < 3; ++t) {
    std::vector<std::vector<std::uint32_t>> sat;
    for (auto& a : all2)
      if (rng() % 2) sat.push_back(a);
    c.add_type("t" + std::to_string(t), 2, sat);
  }
  c.add_type("u", 1, {{1}});
  std::size_t m = 1 + rng() % 5;
  for (std::size_t k = 0; k < m; ++k) {
    if (rng() % 4 == 0) {
      c.apply(3, {rng() % n}, ratio(1 + static_cast<long long>(rng() % 3), 3));
      continue;
    }
    std::size_t a = rng() % n, b = rng() % n;
    if (a == b) b = (a + 1) % n;
    c.apply(rng() % 3, {a, b}, ratio(1 + static_cast<long long>(rng() % 3), 3));
  }
  return c;
}

}  // namespace

TEST(MaxCutSdp, Structure) {
  auto s = build_maxcut_sdp(unit_graph(SimpleGraph(3)));
  EXPECT_EQ(s.n, 3u);
  EXPECT_TRUE(s.objective.empty());
  EXPECT_EQ(s.constant, 0.0);
  EXPECT_EQ(s.constraints.size(), 3u);
  auto t = build_maxcut_sdp(single_edge());
  EXPECT_DOUBLE_EQ(t.constant, 0.5);
  // Antipodal unit vectors: X = [[1,-1],[-1,1]] gives 1/2 + (-1/2)(-1) = 1.
  Eigen::MatrixXd x(2, 2);
  x << 1, -1, -1, 1;
  EXPECT_DOUBLE_EQ(inner(t.objective, x) + t.constant, 1.0);
}

TEST(MaxCutSdp, SingleEdge) {
  auto sol = solve_sdp_lowrank(build_maxcut_sdp(single_edge()));
  EXPECT_NEAR(sol.value, 1.0, kTol);
  EXPECT_LE(sol.residual, 1e-6);
}

TEST(MaxCutSdp, TriangleAndPentagon) {
  auto tri = unit_graph(complete_graph(3));
  auto s3 = solve_sdp_lowrank(build_maxcut_sdp(tri));
  EXPECT_GE(s3.value, oracle::maxcut(tri) - kTol);
  EXPECT_NEAR(s3.value, 2.25, kTol);  // three vectors at 120 degrees: 3 * (1 + 1/2) / 2
  auto c5 = unit_graph(cycle_graph(5));
  auto s5 = solve_sdp_lowrank(build_maxcut_sdp(c5));
  EXPECT_EQ(oracle::maxcut(c5), 4.0);
  EXPECT_GE(s5.value, 4.0 - kTol);
  // Pentagon optimum: 5 (1 - cos(4 pi / 5)) / 2.
  EXPECT_NEAR(s5.value, 2.5 * (1 - std::cos(4 * std::numbers::pi / 5)), kTol);
}

TEST(MaxCutSdp, BipartiteEqualsTotalWeight) {
  std::mt19937_64 rng(4);
  for (auto g : {complete_bipartite_graph(2, 3), cycle_graph(6), complete_bipartite_graph(3, 3)}) {
    WeightedGraph w{g, {}};
    for (std::size_t e = 0; e < g.edge_count(); ++e) w.weights.push_back(ratio(1 + static_cast<long long>(rng() % 3), 2));
    auto s = solve_sdp_lowrank(build_maxcut_sdp(w));
    EXPECT_NEAR(s.value, to_double(w.total_weight()), kTol);
    EXPECT_NEAR(oracle::maxcut(w), to_double(w.total_weight()), 1e-12);
  }
}

TEST(MaxCutSdp, RandomGraphsSoundAndPsd) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    auto g = oracle::random_weighted_graph(3 + rng() % 6, rng);
    SdpOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    auto s = solve_sdp_lowrank(build_maxcut_sdp(g), opt);
    double opt_cut = oracle::maxcut(g);
    EXPECT_GE(s.value, opt_cut - kTol);
    EXPECT_LE(s.residual, 1e-6);
    EXPECT_GE(min_eigenvalue(s.gram), -1e-9);
    EXPECT_LE(gw_symmetric_value(s, g), opt_cut + kTol);
    EXPECT_LE(s.spread, kTol);
  }
}

TEST(MaxCutSdp, Deterministic) {
  auto g = unit_graph(petersen_graph());
  SdpOptions opt;
  opt.seed = 77;
  auto a = solve_sdp_lowrank(build_maxcut_sdp(g), opt);
  auto b = solve_sdp_lowrank(build_maxcut_sdp(g), opt);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.gram, b.gram);
}

TEST(MaxCutSdp, InfeasibleRaises) {
  auto s = single_block(1);
  s.constraints.push_back({{{0, 0, 1.0}}, -1.0, Sense::Eq});
  SdpOptions opt;
  opt.restarts = 1;
  opt.max_outer = 8;
  try {
    solve_sdp_lowrank(s, opt);
    FAIL() << "expected a convergence error";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best().residual, 0.5);
  }
}

TEST(Gw, Alpha) {
  EXPECT_NEAR(gw_alpha(), 0.87856, 1e-4);
  EXPECT_DOUBLE_EQ(gw_ratio(std::numbers::pi), 1.0);
  EXPECT_GT(gw_ratio(std::numbers::pi), gw_alpha());
  // Pointwise inequality on a grid; endpoint t = 1 is 0 >= 0.
  const double a = gw_alpha();
  for (int i = 0; i <= 100000; ++i) {
    double t = -1 + 2.0 * i / 100000;
    ASSERT_GE(std::acos(t) / std::numbers::pi - a * (1 - t) / 2, -1e-12) << t;
  }
}

TEST(Gw, SymmetricValueSandwich) {
  auto e = single_edge();
  auto s = solve_sdp_lowrank(build_maxcut_sdp(e));
  EXPECT_NEAR(gw_symmetric_value(s, e), gw_alpha(), 1e-5);
  auto g = unit_graph(complete_graph(4));
  auto t = solve_sdp_lowrank(build_maxcut_sdp(g));
  EXPECT_NEAR(gw_symmetric_value(t, g) / t.value, gw_alpha(), 1e-12);
}

TEST(Gw, HyperplaneRounding) {
  std::mt19937_64 rng(5);
  auto g = unit_graph(cycle_graph(5));
  auto s = solve_sdp_lowrank(build_maxcut_sdp(g));
  auto r = hyperplane_round(s, g, rng, 4000);
  double se = r.stddev / std::sqrt(4000.0);
  EXPECT_NEAR(r.mean, expected_hyperplane_cut(s, g), 3 * se + 1e-9);
  EXPECT_GE(r.mean, gw_symmetric_value(s, g) - 3 * se);
  // A rank-1 sign factor always returns the same cut.
  SdpSolution fixed;
  fixed.factor = Eigen::MatrixXd(1, 5);
  fixed.factor << 1, -1, 1, -1, 1;
  auto f = hyperplane_round(fixed, g, rng, 50);
  EXPECT_EQ(f.mean, 4.0);
  EXPECT_EQ(f.stddev, 0.0);
}

// ---------------------------------------------------------------------------

TEST(Lc, SingleUnaryConstraint) {
  WeightedCspInstance c(2);
  c.add_variable("x");
  auto t = c.add_type("one", 1, {{1}});
  c.apply(t, {0}, ratio(3, 4));
  LcLayout lay;
  auto s = build_lc_relaxation(c, 4096, &lay);
  EXPECT_EQ(s.n, 4u);
  EXPECT_EQ(lay.vector_block, 2u);
  ASSERT_EQ(s.blocks.size(), 2u);
  EXPECT_TRUE(s.blocks[1].diagonal);
  EXPECT_NEAR(solve_sdp_lowrank(s).value, 0.75, kTol);
}

TEST(Lc, EvenCycleMaxCut) {
  for (std::size_t n : {4, 6}) {
    auto csp = normalize(maxcut_csp(unit_graph(cycle_graph(n))), Normalization::Weight).instance;
    EXPECT_EQ(csp.total_weight(), 1);
    EXPECT_NEAR(lc_value(csp), 1.0, kTol);
  }
}

TEST(Lc, OddCycleBelowOne) {
  auto csp = normalize(maxcut_csp(unit_graph(cycle_graph(3))), Normalization::Weight).instance;
  double v = lc_value(csp);
  EXPECT_GE(v, 2.0 / 3 - kTol);
  EXPECT_LT(v, 1.0 - 1e-3);
}

TEST(Lc, RelaxesBruteForce) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    auto c = random_csp(rng);
    SdpOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    auto s = solve_sdp_lowrank(build_lc_relaxation(c), opt);
    EXPECT_GE(s.value, to_double(csp_brute_opt(c).value) - kTol) << "instance " << t;
    EXPECT_GE(min_eigenvalue(s.gram), -1e-9);
  }
}

TEST(Lc, SizeBudget) {
  WeightedCspInstance c(4);
  for (int i = 0; i < 6; ++i) c.add_variable("x" + std::to_string(i));
  auto t = c.add_type("any", 6, {{0, 0, 0, 0, 0, 0}});
  c.apply(t, {0, 1, 2, 3, 4, 5}, 1);
  EXPECT_THROW(build_lc_relaxation(c, 1000), SizeError);
}

TEST(Normalize, Modes) {
  std::mt19937_64 rng(2);
  auto c = random_csp(rng);
  auto w = normalize(c, Normalization::Weight);
  EXPECT_EQ(w.instance.total_weight(), 1);
  EXPECT_EQ(w.factor * c.total_weight(), 1);
  auto k = normalize(c, Normalization::Count);
  for (auto& a : k.instance.applications()) EXPECT_EQ(a.weight, ExactRatio(1, c.applications().size()));
  EXPECT_EQ(normalize(c, Normalization::None).instance, c);
  EXPECT_THROW(parse_normalization("rows"), InvalidParameter);
}

TEST(Gap, SingletonAndMonotone) {
  WeightedCspInstance c(2);
  c.add_variable("x");
  auto t = c.add_type("one", 1, {{1}});
  c.apply(t, {0}, 1);
  auto table = gap_curve_estimate({c}, 0.01);
  ASSERT_EQ(table.points.size(), 1u);
  EXPECT_TRUE(std::isinf(table.lookup(table.points[0].sdp - 0.1)));
  EXPECT_NEAR(table.lookup(table.points[0].sdp + 0.1), 1 - 0.01, 1e-12);

  std::mt19937_64 rng(8);
  std::vector<WeightedCspInstance> fam;
  for (int i = 0; i < 8; ++i) fam.push_back(random_csp(rng));
  auto g = gap_curve_estimate(fam, 0.0);
  double prev = -std::numeric_limits<double>::infinity();
  for (double x = 0; x <= 1.2; x += 0.01) {
    double v = g.lookup(x);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Sdpa, RoundTrip) {
  auto s = build_lc_relaxation(maxcut_csp(unit_graph(cycle_graph(4))));
  std::stringstream ss;
  write_sdpa(ss, s);
  auto back = read_sdpa(ss);
  EXPECT_EQ(back.n, s.n);
  EXPECT_EQ(back.blocks.size(), s.blocks.size());
  EXPECT_EQ(back.constraints.size(), s.constraints.size());
  // Same value on a random PSD matrix, block structure respected.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd f(3, long(s.n));
  for (long i = 0; i < f.size(); ++i) f.data()[i] = gauss(rng);
  Eigen::MatrixXd x = f.transpose() * f;
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j)
      if ((i < 8) != (j < 8) || (i >= 8 && i != j)) x(long(i), long(j)) = 0;
  EXPECT_NEAR(inner(back.objective, x), inner(s.objective, x), 1e-12);
  for (std::size_t k = 0; k < s.constraints.size(); ++k) {
    EXPECT_NEAR(inner(back.constraints[k].entries, x), inner(s.constraints[k].entries, x), 1e-12);
    EXPECT_EQ(back.constraints[k].bound, s.constraints[k].bound);
  }
}

TEST(Sdpa, ConstantAndSlack) {
  auto s = build_maxcut_sdp(single_edge());
  s.constraints.push_back({{{0, 1, 1.0}}, 0.5, Sense::Le});
  std::stringstream ss;
  write_sdpa(ss, s);
  auto text = ss.str();
  EXPECT_NE(text.find("* constant 0.5"), std::string::npos);
  auto back = read_sdpa(ss);
  EXPECT_EQ(back.constant, 0.5);
  EXPECT_EQ(back.blocks.size(), 2u);
  EXPECT_TRUE(back.blocks[1].diagonal);
  std::istringstream bad("2\n1\n2\n1 1\n0 1 5 5 1.0\n");
  EXPECT_THROW(read_sdpa(bad), ParseError);
}
