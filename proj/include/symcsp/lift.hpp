// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "symcsp/error.hpp"
#include "symcsp/instances.hpp"

namespace symcsp {

/// Element x_v^g of the label-lifted universe.
struct LiftedVertex {
  std::size_t v = 0;
  Gf2Vector g;
  friend bool operator==(const LiftedVertex&, const LiftedVertex&) = default;
  friend auto operator<=>(const LiftedVertex&, const LiftedVertex&) = default;
};

struct LiftCaps {
  std::uint64_t max_vertices = std::uint64_t{1} << 16;
  std::uint64_t max_constraints = std::uint64_t{1} << 24;
};

/// Index of (v, g) in label_lift's vertex order.
inline std::size_t lifted_index(const GroupUgInstance& base, const LiftedVertex& x) {
  return (x.v << base.m()) | static_cast<std::size_t>(x.g.bits());
}

inline std::vector<Gf2Vector> lifted_allowed_diffs(const GroupUgInstance& base, const LiftedVertex& a,
                                                   const LiftedVertex& b) {
  const Bundle* bundle = base.bundle_between(a.v, b.v);
  if (!bundle) return {};
  auto shift = a.g + b.g;
  std::vector<Gf2Vector> out;
  out.reserve(bundle->diffs.size());
  for (auto& z : bundle->diffs) out.push_back(z + shift);
  std::sort(out.begin(), out.end());
  return out;
}

/// G(U): vertices (v, g) named "<v>@<hex g>", constraints x_{v1}^{g1} + x_{v2}^{g2} = z + g1 + g2.
inline GroupUgInstance label_lift(const GroupUgInstance& base, const LiftCaps& caps = {}) {
  const unsigned m = base.m();
  if (m >= 32) throw SizeError("label lift of m >= 32 is not desk-scale");
  const std::uint64_t q = std::uint64_t{1} << m;
  if (base.vertex_count() * q > caps.max_vertices) throw SizeError("lifted vertex count exceeds cap");
  if (base.constraint_count() * q * q > caps.max_constraints) throw SizeError("lifted constraint count exceeds cap");
  GroupUgInstance out(m);
  for (std::size_t v = 0; v < base.vertex_count(); ++v)
    for (std::uint64_t g = 0; g < q; ++g) out.add_vertex(base.name(v) + "@" + Gf2Vector(m, g).hex());
  for (auto& b : base.bundles())
    for (std::uint64_t g1 = 0; g1 < q; ++g1)
      for (std::uint64_t g2 = 0; g2 < q; ++g2) {
        LiftedVertex a{b.u, Gf2Vector(m, g1)}, c{b.v, Gf2Vector(m, g2)};
        out.add_bundle(lifted_index(base, a), lifted_index(base, c), lifted_allowed_diffs(base, a, c));
      }
  return out;
}

}  // namespace symcsp
