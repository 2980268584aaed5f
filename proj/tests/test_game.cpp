// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "symcsp/duplicators.hpp"
#include "symcsp/game.hpp"

using namespace symcsp;

namespace {

Gf2Vector vec(unsigned m, std::uint64_t bits) { return {m, bits}; }

GroupUgInstance small_instance() {
  GroupUgInstance u(2);
  for (auto n : {"a", "b", "c"}) u.add_vertex(n);
  u.add_bundle(0, 1, {vec(2, 0), vec(2, 1)});
  u.add_bundle(1, 2, {vec(2, 3)});
  return u;
}

/// Oracle for edge consistency: compare every lifted relation on the edge by brute force.
bool lifted_edge_ok(const GroupUgInstance& a, const GroupUgInstance& b, std::size_t u, std::size_t v,
                    const GStarMap& g) {
  for (std::uint64_t x = 0; x < (1u << a.m()); ++x)
    for (std::uint64_t y = 0; y < (1u << a.m()); ++y) {
      LiftedVertex p{u, vec(a.m(), x)}, q{v, vec(a.m(), y)};
      if (!check_partial_isomorphism(a, b, {{p, apply_gstar(g, p)}, {q, apply_gstar(g, q)}})) return false;
    }
  return true;
}

}  // namespace

TEST(PartialIso, TrivialCases) {
  auto u = small_instance();
  EXPECT_TRUE(check_partial_isomorphism(u, u, {}));
  LiftedVertex x{0, vec(2, 1)};
  EXPECT_TRUE(check_partial_isomorphism(u, u, {{x, x}}));
}

TEST(PartialIso, StarredEdgeMismatch) {
  auto k = k4_klein_pair();
  // {v3, v4} carries {0, a} in U1 and {b, c} in U2.
  LiftedVertex p{2, vec(2, 0)}, q{3, vec(2, 0)};
  EXPECT_FALSE(check_partial_isomorphism(k.u1, k.u2, {{p, p}, {q, q}}));
  EXPECT_TRUE(check_partial_isomorphism(k.u1, k.u1, {{p, p}, {q, q}}));
}

TEST(PartialIso, EqualityMustAgree) {
  auto u = small_instance();
  LiftedVertex x{0, vec(2, 1)}, y{0, vec(2, 2)};
  EXPECT_FALSE(check_partial_isomorphism(u, u, {{x, x}, {x, y}}));
}

TEST(Game, IdentitySurvivesOnEqualStructures) {
  auto u = small_instance();
  IdentityDuplicator dup(u);
  RandomSpoiler sp(u, 5);
  auto t = play_game(u, u, 3, dup, sp, 300);
  EXPECT_EQ(t.outcome, Outcome::Survived);
  EXPECT_EQ(t.rounds.size(), 300u);
}

TEST(Game, OnePebbleNeverLoses) {
  auto k = k4_klein_pair();
  IdentityDuplicator dup(k.u1);
  RandomSpoiler sp(k.u1, 9);
  EXPECT_EQ(play_game(k.u1, k.u2, 1, dup, sp, 200).outcome, Outcome::Survived);
}

TEST(Game, IdentityLosesOnStarredEdge) {
  auto k = k4_klein_pair();
  IdentityDuplicator dup(k.u1);
  ScriptedSpoiler sp({{0, {2, vec(2, 0)}}, {1, {3, vec(2, 0)}}});
  auto t = play_game(k.u1, k.u2, 2, dup, sp, 10);
  EXPECT_EQ(t.outcome, Outcome::SpoilerWins);
  EXPECT_EQ(t.rounds.size(), 2u);
}

namespace {
class MovingDuplicator : public Duplicator {
 public:
  explicit MovingDuplicator(std::size_t n) : n_(n) {}
  std::string name() const override { return "moving"; }
  DuplicatorReply respond(const GameState&, AssertLevel) override { return {GStarMap(n_, vec(2, ++calls_ % 2)), {}}; }
  std::unique_ptr<Duplicator> clone() const override { return std::make_unique<MovingDuplicator>(*this); }

 private:
  std::size_t n_;
  std::uint64_t calls_ = 0;
};
}  // namespace

TEST(Game, BijectionMustRespectPebbles) {
  auto u = small_instance();
  MovingDuplicator dup(u.vertex_count());
  ScriptedSpoiler sp({{0, {0, vec(2, 0)}}, {1, {1, vec(2, 0)}}});
  auto t = play_game(u, u, 2, dup, sp, 5);
  EXPECT_EQ(t.outcome, Outcome::StrategyViolation);
  ASSERT_TRUE(t.violator.has_value());
  EXPECT_EQ(*t.violator, Side::Duplicator);
}

TEST(Game, SpoilerPickOutOfRange) {
  auto u = small_instance();
  IdentityDuplicator dup(u);
  ScriptedSpoiler sp({{7, {0, vec(2, 0)}}});
  auto t = play_game(u, u, 2, dup, sp, 5);
  EXPECT_EQ(t.outcome, Outcome::StrategyViolation);
  EXPECT_EQ(*t.violator, Side::Spoiler);
}

TEST(Game, TranscriptsReplay) {
  auto [u1, u2] = fixture::k2_pair(3);
  auto run = [&] {
    DuplicatorK2 dup(u1, u2);
    RandomSpoiler sp(u1, 17);
    return to_json(u1, play_game(u1, u2, 2, dup, sp, 40)).dump();
  };
  EXPECT_EQ(run(), run());
}

TEST(Game, TranscriptJsonShape) {
  auto u = small_instance();
  IdentityDuplicator dup(u);
  RandomSpoiler sp(u, 1);
  auto j = to_json(u, play_game(u, u, 2, dup, sp, 3));
  EXPECT_EQ(j["outcome"], "survived");
  ASSERT_EQ(j["rounds"].size(), 3u);
  EXPECT_TRUE(j["rounds"][0]["gstar"].contains("a"));
  EXPECT_EQ(j["rounds"][0]["placement"].size(), 2u);
}

// ---------------------------------------------------------------------------

TEST(DuplicatorK2, NoPebblesGivesZero) {
  auto [u1, u2] = fixture::k2_pair(1);
  DuplicatorK2 dup(u1, u2);
  auto r = dup.respond(GameState(2), AssertLevel::Full);
  for (auto& g : r.gstar) EXPECT_TRUE(g.is_zero());
}

TEST(DuplicatorK2, PinnedAndNeighbourValues) {
  auto [u1, u2] = fixture::k2_pair(4);
  DuplicatorK2 dup(u1, u2);
  GameState s(2);
  auto g1 = vec(2, 1), g2 = vec(2, 3);
  s.pebbles[0] = PebblePair{{0, g1}, {0, g2}};
  auto r = dup.respond(s, AssertLevel::Full);
  EXPECT_EQ(r.gstar[0], g1 + g2);
  for (std::size_t v : {1, 2, 4}) {
    auto g3 = u2.bundle_between(0, v)->diffs[0];
    EXPECT_EQ(r.gstar[v], g1 + g2 + g3);
    EXPECT_TRUE(lifted_edge_ok(u1, u2, 0, v, r.gstar));
  }
  EXPECT_TRUE(r.gstar[3].is_zero());
  for (auto& c : r.checks) EXPECT_TRUE(c.ok) << c.name;
}

TEST(DuplicatorK2, RejectsDifferentGraphs) {
  auto [u1, u2] = fixture::k2_pair(1);
  auto other = small_instance();
  EXPECT_THROW(DuplicatorK2(u1, other), PreconditionError);
}

TEST(DuplicatorK2, SurvivesRandomSpoiler) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto [u1, u2] = fixture::k2_pair(seed);
    DuplicatorK2 dup(u1, u2);
    RandomSpoiler sp(u1, seed + 100);
    auto t = play_game(u1, u2, 2, dup, sp, 300, AssertLevel::Full);
    EXPECT_EQ(t.outcome, Outcome::Survived) << t.message;
  }
}

TEST(Exhaustive, IdenticalStructures) {
  auto u = small_instance();
  IdentityDuplicator dup(u);
  auto r = spoiler_exhaustive(u, u, 2, dup, 2);
  EXPECT_FALSE(r.found);
  EXPECT_GT(r.nodes, 0u);
}

TEST(Exhaustive, FindsLineAgainstIdentityOnKleinPair) {
  auto k = k4_klein_pair();
  IdentityDuplicator dup(k.u1);
  auto r = spoiler_exhaustive(k.u1, k.u2, 2, dup, 2);
  ASSERT_TRUE(r.found);
  ScriptedSpoiler replay(r.line);
  IdentityDuplicator fresh(k.u1);
  EXPECT_EQ(play_game(k.u1, k.u2, 2, fresh, replay, r.line.size()).outcome, Outcome::SpoilerWins);
}

TEST(Exhaustive, K2DuplicatorHoldsAtDepthTwo) {
  auto [u1, u2] = fixture::k2_pair(2);
  DuplicatorK2 dup(u1, u2);
  EXPECT_FALSE(spoiler_exhaustive(u1, u2, 2, dup, 2).found);
  IdentityDuplicator id(u1);
  EXPECT_TRUE(spoiler_exhaustive(u1, u2, 2, id, 2).found);
}

TEST(Exhaustive, BudgetExceeded) {
  auto k = k4_klein_pair();
  IdentityDuplicator dup(k.u1);
  EXPECT_THROW(spoiler_exhaustive(k.u1, k.u2, 2, dup, 6, 1000), SizeError);
}

// ---------------------------------------------------------------------------

TEST(DuplicatorCops, StationaryRobberKeepsMap) {
  auto k = k4_klein_pair();
  DuplicatorCops dup(k);
  auto r = dup.respond(GameState(3), AssertLevel::Full);
  for (auto& g : r.gstar) EXPECT_TRUE(g.is_zero());
  EXPECT_TRUE(dup.last_path().empty());
  EXPECT_EQ(dup.robber_edge(), (Edge{2, 3}));
}

TEST(DuplicatorCops, K4WorkedExample) {
  auto k = k4_klein_pair();
  DuplicatorCops dup(k);
  GameState s(3);
  s.pebbles[0] = PebblePair{{0, vec(2, 0)}, {0, vec(2, 0)}};
  s.pebbles[1] = PebblePair{{3, vec(2, 0)}, {3, vec(2, 0)}};
  auto r = dup.respond(s, AssertLevel::Full);
  EXPECT_EQ(r.gstar[2], klein_element(1));  // b = m(v1, v3)
  EXPECT_TRUE(r.gstar[0].is_zero());
  EXPECT_TRUE(r.gstar[3].is_zero());
  EXPECT_EQ(dup.robber_edge(), (Edge{1, 2}));
  EXPECT_TRUE(lifted_edge_ok(k.u1, k.u2, 0, 2, r.gstar));
  for (auto& c : r.checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

TEST(DuplicatorCops, RejectsNonCubic) {
  KleinPair k = k4_klein_pair();
  k.h = cycle_graph(4);
  EXPECT_THROW(DuplicatorCops{k}, PreconditionError);
}

TEST(DuplicatorCops, SurvivesOnK4AndCopsGraph) {
  for (auto pair : {k4_klein_pair(), fixture::cops_pair(3)}) {
    DuplicatorCops dup(pair);
    RandomSpoiler sp(pair.u1, 23);
    auto t = play_game(pair.u1, pair.u2, 3, dup, sp, 100, AssertLevel::Full);
    EXPECT_EQ(t.outcome, Outcome::Survived) << t.message;
  }
}

// ---------------------------------------------------------------------------

TEST(Steiner, SingleTerminalAndPath) {
  auto g = cycle_graph(6);
  auto t = steiner_tree(g, {2});
  EXPECT_EQ(t.vertices, (std::vector<std::size_t>{2}));
  EXPECT_TRUE(t.edges.empty());
  t = steiner_tree(g, {0, 2});
  EXPECT_EQ(t.vertices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Steiner, PetersenMinimality) {
  // Oracle: for three terminals the optimum is min over centres c of the summed distances.
  auto g = petersen_graph();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> t{rng() % 10, rng() % 10, rng() % 10};
    auto tree = steiner_tree(g, t);
    std::size_t best = 1000;
    for (std::size_t c = 0; c < 10; ++c) {
      std::size_t s = 0;
      for (auto x : t) s += g.shortest_path(c, x).size() - 1;
      best = std::min(best, s);
    }
    EXPECT_EQ(tree.edges.size(), best);
    for (auto x : t) EXPECT_TRUE(std::binary_search(tree.vertices.begin(), tree.vertices.end(), x));
    for (auto& e : tree.edges) EXPECT_TRUE(g.has_edge(e.u, e.v));
  }
}

TEST(ExtendAlongPath, ConstantWhenNothingToDo) {
  std::vector<std::size_t> path{0, 1, 2, 3};
  std::vector<Gf2Subspace> z(3, Gf2Subspace::full(3));
  std::vector<Gf2Vector> b(3, vec(3, 0));
  auto g = extend_along_path(path, vec(3, 5), vec(3, 5), z, b);
  for (auto& x : g) EXPECT_EQ(x, vec(3, 5));
}

TEST(ExtendAlongPath, RandomSpanningPaths) {
  std::mt19937_64 rng(12);
  int done = 0;
  while (done < 500) {
    unsigned m = 1 + rng() % 4, ell = rng() % (m + 1);
    std::size_t len = 1 + rng() % 5;
    std::vector<std::size_t> path;
    std::vector<Gf2Subspace> z;
    std::vector<Gf2Vector> b;
    GroupUgInstance u1(m), u2(m);
    for (std::size_t i = 0; i <= len; ++i) {
      path.push_back(i);
      u1.add_vertex("p" + std::to_string(i));
      u2.add_vertex("p" + std::to_string(i));
    }
    Gf2Subspace acc(m);
    for (std::size_t i = 0; i < len; ++i) {
      z.push_back(random_subspace(m, ell, rng));
      b.push_back(random_vector(m, rng));
      for (auto& v : z.back().basis()) acc.insert(v);
      auto els = z.back().elements();
      u1.add_bundle(i, i + 1, els);
      for (auto& e : els) e += b.back();
      u2.add_bundle(i, i + 1, els);
    }
    auto gs = random_vector(m, rng), ge = random_vector(m, rng);
    if (!acc.spans_all()) continue;
    auto g = extend_along_path(path, gs, ge, z, b);
    ASSERT_EQ(g.size(), path.size());
    EXPECT_EQ(g.front(), gs);
    EXPECT_EQ(g.back(), ge);
    for (std::size_t i = 0; i < len; ++i) ASSERT_TRUE(lifted_edge_ok(u1, u2, i, i + 1, g));
    ++done;
  }
}

TEST(ExtendAlongPath, NotInSpan) {
  std::vector<Gf2Subspace> z{Gf2Subspace(3)};
  std::vector<Gf2Vector> b{vec(3, 0)};
  EXPECT_THROW(extend_along_path({0, 1}, vec(3, 0), vec(3, 1), z, b), NotInSpan);
}

TEST(DuplicatorTree, FirstRoundIsZero) {
  auto p = fixture::petersen_pair(1);
  DuplicatorTree dup(p);
  auto r = dup.respond(GameState(2), AssertLevel::Full);
  for (auto& g : r.gstar) EXPECT_TRUE(g.is_zero());
  for (auto& c : r.checks) EXPECT_TRUE(c.ok) << c.name;
  for (std::size_t u = 0; u < 10; ++u) EXPECT_EQ(dup.plan(u).tree.vertices.size(), 1u);
}

TEST(DuplicatorTree, SurvivesRandomSpoiler) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto p = fixture::petersen_pair(seed);
    DuplicatorTree dup(p);
    RandomSpoiler sp(p.u1, seed * 7);
    auto t = play_game(p.u1, p.u2, 2, dup, sp, 100, AssertLevel::Full);
    EXPECT_EQ(t.outcome, Outcome::Survived) << "seed " << seed << ": " << t.message;
  }
}

TEST(DuplicatorTree, ShortGirthIsReportedAsData) {
  // Petersen has girth 5, far below (k+1)^2 r for k = 3; failures surface as girth-lemma reports.
  int reported = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto p = fixture::petersen_pair(seed);
    DuplicatorTree dup(p);
    RandomSpoiler sp(p.u1, seed * 7);
    auto t = play_game(p.u1, p.u2, 3, dup, sp, 100, AssertLevel::Full);
    if (t.outcome == Outcome::Survived) continue;
    ASSERT_EQ(t.outcome, Outcome::StrategyViolation);
    EXPECT_EQ(*t.violator, Side::Duplicator);
    EXPECT_NE(t.message.find("girth-lemma"), std::string::npos) << t.message;
    ++reported;
  }
  EXPECT_GT(reported, 0);
}
