// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcsp/error.hpp"
#include "symcsp/instances.hpp"
#include "symcsp/lift.hpp"
#include "symcsp/solvers.hpp"

namespace symcsp {

/// Bijection f(x_v^g) = x_v^{g + g*(v)}, indexed by base vertex.
using GStarMap = std::vector<Gf2Vector>;

enum class AssertLevel { Off, Edges, Full };

inline AssertLevel parse_assert_level(std::string_view s) {
  if (s == "off") return AssertLevel::Off;
  if (s == "edges") return AssertLevel::Edges;
  if (s == "full") return AssertLevel::Full;
  throw InvalidParameter("assert level must be off, edges or full");
}

struct PebblePair {
  LiftedVertex a, b;
  friend bool operator==(const PebblePair&, const PebblePair&) = default;
};

/// Partial isomorphism between pebbled tuples of G(A) and G(B): equality and every
/// lifted relation agree on each pair of positions.
inline bool check_partial_isomorphism(const GroupUgInstance& a, const GroupUgInstance& b,
                                      const std::vector<PebblePair>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i; j < pairs.size(); ++j) {
      auto& p = pairs[i];
      auto& q = pairs[j];
      if ((p.a == q.a) != (p.b == q.b)) return false;
      if (lifted_allowed_diffs(a, p.a, q.a) != lifted_allowed_diffs(b, p.b, q.b)) return false;
    }
  return true;
}

inline LiftedVertex apply_gstar(const GStarMap& g, const LiftedVertex& x) { return {x.v, x.g + g.at(x.v)}; }

struct GameState {
  std::size_t k = 0;
  std::vector<std::optional<PebblePair>> pebbles;
  std::size_t round = 0;

  explicit GameState(std::size_t k_ = 0) : k(k_), pebbles(k_) {}

  std::vector<PebblePair> placed() const {
    std::vector<PebblePair> out;
    for (auto& p : pebbles)
      if (p) out.push_back(*p);
    return out;
  }

  /// Base vertices carrying a pebble (A side), sorted and unique.
  std::vector<std::size_t> pebbled_vertices() const {
    std::vector<std::size_t> out;
    for (auto& p : pebbles)
      if (p) out.push_back(p->a.v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct DuplicatorReply {
  GStarMap gstar;
  std::vector<Check> checks;
};

class Duplicator {
 public:
  virtual ~Duplicator() = default;
  virtual std::string name() const = 0;
  /// Called after Spoiler has picked up a pebble.
  virtual DuplicatorReply respond(const GameState& state, AssertLevel level) = 0;
  /// Called after the pebble has been placed.
  virtual void observe(const GameState&, std::size_t /*pebble*/) {}
  virtual std::unique_ptr<Duplicator> clone() const = 0;
};

class Spoiler {
 public:
  virtual ~Spoiler() = default;
  virtual std::string name() const = 0;
  virtual std::size_t pick(const GameState& state) = 0;
  virtual LiftedVertex place(const GameState& state, const GStarMap& gstar) = 0;
};

enum class Outcome { SpoilerWins, Survived, StrategyViolation };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::SpoilerWins: return "spoiler-wins";
    case Outcome::Survived: return "survived";
    case Outcome::StrategyViolation: return "strategy-violation";
  }
  return "?";
}

struct RoundRecord {
  std::size_t round = 0;
  std::size_t picked = 0;
  GStarMap gstar;
  std::optional<PebblePair> placement;
  std::vector<Check> checks;
  bool partial_isomorphism = true;
};

struct Transcript {
  Outcome outcome = Outcome::Survived;
  std::optional<Side> violator;
  std::string message;
  std::vector<RoundRecord> rounds;
};

namespace detail {

inline void validate_gstar(const GroupUgInstance& a, const GStarMap& g) {
  if (g.size() != a.vertex_count()) throw StrategyViolation(Side::Duplicator, "g* map does not cover every vertex");
  for (auto& x : g)
    if (x.dim() != a.m()) throw StrategyViolation(Side::Duplicator, "g* value has the wrong dimension");
}

}  // namespace detail

/// Alternates pick-up, bijection, placement. Spoiler wins on the first failure of partial
/// isomorphism. Strategy violations end the game and are reported, not thrown.
inline Transcript play_game(const GroupUgInstance& a, const GroupUgInstance& b, std::size_t k, Duplicator& dup,
                            Spoiler& spoiler, std::size_t max_rounds, AssertLevel level = AssertLevel::Full) {
  if (a.vertex_count() != b.vertex_count() || a.m() != b.m())
    throw PreconditionError("lifted universes differ in size");
  if (k == 0) throw InvalidParameter("k must be positive");
  Transcript t;
  GameState state(k);
  try {
    for (std::size_t round = 1; round <= max_rounds; ++round) {
      state.round = round;
      RoundRecord rec;
      rec.round = round;
      rec.picked = spoiler.pick(state);
      if (rec.picked >= k) throw StrategyViolation(Side::Spoiler, "picked pebble index out of range");
      state.pebbles[rec.picked].reset();
      auto reply = dup.respond(state, level);
      rec.gstar = reply.gstar;
      rec.checks = reply.checks;
      t.rounds.push_back(rec);
      detail::validate_gstar(a, reply.gstar);
      for (auto& p : state.placed())
        if (apply_gstar(reply.gstar, p.a) != p.b)
          throw StrategyViolation(Side::Duplicator, "bijection moves a pebbled element off its partner");
      if (level != AssertLevel::Off)
        for (auto& c : reply.checks)
          if (!c.ok) throw StrategyViolation(Side::Duplicator, c.name + ": " + c.detail);
      auto x = spoiler.place(state, reply.gstar);
      if (x.v >= a.vertex_count() || x.g.dim() != a.m())
        throw StrategyViolation(Side::Spoiler, "placement outside the universe");
      PebblePair pair{x, apply_gstar(reply.gstar, x)};
      state.pebbles[rec.picked] = pair;
      t.rounds.back().placement = pair;
      dup.observe(state, rec.picked);
      bool iso = check_partial_isomorphism(a, b, state.placed());
      t.rounds.back().partial_isomorphism = iso;
      if (!iso) {
        t.outcome = Outcome::SpoilerWins;
        t.message = "partial isomorphism fails after round " + std::to_string(round);
        return t;
      }
    }
  } catch (const StrategyViolation& e) {
    t.outcome = Outcome::StrategyViolation;
    t.violator = e.side();
    t.message = e.what();
    return t;
  }
  t.outcome = Outcome::Survived;
  return t;
}

// ---------------------------------------------------------------------------
// Spoilers

class RandomSpoiler : public Spoiler {
 public:
  RandomSpoiler(const GroupUgInstance& a, std::uint64_t seed) : n_(a.vertex_count()), m_(a.m()), rng_(seed) {}
  std::string name() const override { return "random"; }
  std::size_t pick(const GameState& s) override { return std::uniform_int_distribution<std::size_t>(0, s.k - 1)(rng_); }
  LiftedVertex place(const GameState&, const GStarMap&) override {
    auto v = std::uniform_int_distribution<std::size_t>(0, n_ - 1)(rng_);
    return {v, random_vector(m_, rng_)};
  }

 private:
  std::size_t n_;
  unsigned m_;
  std::mt19937_64 rng_;
};

struct SpoilerMove {
  std::size_t pick = 0;
  LiftedVertex element;
};

/// Replays a fixed line, then keeps re-placing the last move.
class ScriptedSpoiler : public Spoiler {
 public:
  explicit ScriptedSpoiler(std::vector<SpoilerMove> line) : line_(std::move(line)) {
    if (line_.empty()) throw InvalidParameter("scripted spoiler needs at least one move");
  }
  std::string name() const override { return "scripted"; }
  std::size_t pick(const GameState&) override { return current().pick; }
  LiftedVertex place(const GameState&, const GStarMap&) override { return line_[std::min(next_++, line_.size() - 1)].element; }

 private:
  const SpoilerMove& current() const { return line_[std::min(next_, line_.size() - 1)]; }
  std::vector<SpoilerMove> line_;
  std::size_t next_ = 0;
};

struct SearchResult {
  bool found = false;
  std::vector<SpoilerMove> line;
  std::uint64_t nodes = 0;
};

/// Depth-limited search over pick-up/placement sequences from the empty board against a
/// fixed Duplicator. Unplaced pebbles are interchangeable, so only the first is tried.
inline SearchResult spoiler_exhaustive(const GroupUgInstance& a, const GroupUgInstance& b, std::size_t k,
                                       const Duplicator& dup, std::size_t depth,
                                       std::uint64_t budget = std::uint64_t{1} << 24,
                                       AssertLevel level = AssertLevel::Off) {
  if (a.vertex_count() != b.vertex_count() || a.m() != b.m())
    throw PreconditionError("lifted universes differ in size");
  const std::uint64_t universe = a.vertex_count() * (std::uint64_t{1} << a.m());
  if (detail::saturating_pow(k * universe, depth) > budget) throw SizeError("exhaustive spoiler search exceeds budget");
  SearchResult res;
  std::vector<SpoilerMove> line;
  std::function<bool(const GameState&, const Duplicator&, std::size_t)> search =
      [&](const GameState& state, const Duplicator& d, std::size_t left) {
        bool tried_unplaced = false;
        for (std::size_t i = 0; i < k; ++i) {
          if (!state.pebbles[i]) {
            if (tried_unplaced) continue;
            tried_unplaced = true;
          }
          GameState picked = state;
          picked.round = state.round + 1;
          picked.pebbles[i].reset();
          auto d1 = d.clone();
          DuplicatorReply reply;
          try {
            reply = d1->respond(picked, level);
            detail::validate_gstar(a, reply.gstar);
            for (auto& p : picked.placed())
              if (apply_gstar(reply.gstar, p.a) != p.b) throw StrategyViolation(Side::Duplicator, "pebble moved");
          } catch (const StrategyViolation&) {
            line.push_back({i, {}});
            return true;
          }
          for (std::size_t v = 0; v < a.vertex_count(); ++v)
            for (std::uint64_t g = 0; g < (std::uint64_t{1} << a.m()); ++g) {
              ++res.nodes;
              LiftedVertex x{v, Gf2Vector(a.m(), g)};
              GameState next = picked;
              next.pebbles[i] = PebblePair{x, apply_gstar(reply.gstar, x)};
              line.push_back({i, x});
              if (!check_partial_isomorphism(a, b, next.placed())) return true;
              if (left > 1) {
                auto d2 = d1->clone();
                d2->observe(next, i);
                if (search(next, *d2, left - 1)) return true;
              }
              line.pop_back();
            }
        }
        return false;
      };
  if (depth > 0 && search(GameState(k), dup, depth)) {
    res.found = true;
    res.line = line;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Transcript serialization

inline nlohmann::json gstar_json(const GroupUgInstance& a, const GStarMap& g) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t v = 0; v < g.size(); ++v) j[a.name(v)] = g[v].hex();
  return j;
}

inline std::string lifted_name(const GroupUgInstance& a, const LiftedVertex& x) { return a.name(x.v) + "@" + x.g.hex(); }

inline nlohmann::json to_json(const GroupUgInstance& a, const Transcript& t) {
  nlohmann::json rounds = nlohmann::json::array();
  for (auto& r : t.rounds) {
    nlohmann::json checks = nlohmann::json::array();
    for (auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    nlohmann::json rec{{"round", r.round},
                       {"picked", r.picked},
                       {"gstar", gstar_json(a, r.gstar)},
                       {"checks", checks},
                       {"partial_isomorphism", r.partial_isomorphism}};
    if (r.placement) rec["placement"] = {lifted_name(a, r.placement->a), lifted_name(a, r.placement->b)};
    else rec["placement"] = nullptr;
    rounds.push_back(rec);
  }
  nlohmann::json j{{"outcome", to_string(t.outcome)}, {"message", t.message}, {"rounds", rounds}};
  if (t.violator) j["violator"] = *t.violator == Side::Spoiler ? "spoiler" : "duplicator";
  else j["violator"] = nullptr;
  return j;
}

}  // namespace symcsp
