// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <utility>

#include "symcsp/constructions.hpp"

namespace fixture {

using namespace symcsp;

/// 5-cycle with the chord {x0,x2}. U1 asks x_u = x_v; U2 asks x_u + x_v = g with g != 0
/// drawn per edge.
inline std::pair<GroupUgInstance, GroupUgInstance> k2_pair(std::uint64_t seed, unsigned m = 2) {
  std::mt19937_64 rng(seed);
  GroupUgInstance u1(m), u2(m);
  for (int i = 0; i < 5; ++i) {
    u1.add_vertex("x" + std::to_string(i));
    u2.add_vertex("x" + std::to_string(i));
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 2}};
  std::uniform_int_distribution<std::uint64_t> nz(1, dim_mask(m));
  for (auto [a, b] : edges) {
    u1.add_bundle(a, b, {Gf2Vector::zero(m)});
    u2.add_bundle(a, b, {Gf2Vector(m, nz(rng))});
  }
  return {u1, u2};
}

/// Klein pair over the cops-and-robbers graph, star on the first edge of colour a.
inline KleinPair cops_pair(std::size_t k) {
  auto h = cops_robbers_graph(k);
  auto ms = matching_decomposition(h);
  return klein_pair(h, coloring_from_matchings(h, ms), ms[0][0]);
}

/// Relaxed desk-scale random pair on the Petersen graph.
inline InapproxPair petersen_pair(std::uint64_t seed) {
  auto p = desk_params(3, 2, 3, 3);
  std::mt19937_64 rng(seed);
  PairOptions opt;
  opt.girth_override = true;
  return random_inapprox_pair(p, petersen_graph(), rng, opt);
}

}  // namespace fixture
