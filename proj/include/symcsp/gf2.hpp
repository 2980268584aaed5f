// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symcsp/error.hpp"

namespace symcsp {

inline constexpr unsigned kMaxGf2Dim = 64;

constexpr std::uint64_t dim_mask(unsigned dim) {
  return dim >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
}

/// Element of F_2^m packed into one machine word. Coordinate i is bit i.
class Gf2Vector {
 public:
  constexpr Gf2Vector() = default;
  Gf2Vector(unsigned dim, std::uint64_t bits) : bits_(bits), dim_(dim) {
    if (dim == 0 || dim > kMaxGf2Dim) throw InvalidParameter("GF(2) dimension must be in 1..64");
    if (bits & ~dim_mask(dim)) throw InvalidParameter("bits outside dimension");
  }

  static Gf2Vector zero(unsigned dim) { return {dim, 0}; }
  static Gf2Vector unit(unsigned dim, unsigned i) {
    if (i >= dim) throw InvalidParameter("unit vector index out of range");
    return {dim, std::uint64_t{1} << i};
  }

  std::uint64_t bits() const noexcept { return bits_; }
  unsigned dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return bits_ == 0; }
  bool bit(unsigned i) const noexcept { return (bits_ >> i) & 1u; }

  Gf2Vector& operator+=(const Gf2Vector& o) {
    if (o.dim_ != dim_) throw InvalidParameter("GF(2) dimension mismatch");
    bits_ ^= o.bits_;
    return *this;
  }
  friend Gf2Vector operator+(Gf2Vector a, const Gf2Vector& b) { return a += b; }
  friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;
  friend auto operator<=>(const Gf2Vector& a, const Gf2Vector& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out((dim_ + 3) / 4, '0');
    for (std::size_t i = 0; i < out.size(); ++i)
      out[out.size() - 1 - i] = digits[(bits_ >> (4 * i)) & 0xf];
    return out;
  }

  static Gf2Vector from_hex(std::string_view s, unsigned dim) {
    if (s.empty() || s.size() > (dim + 3) / 4) throw InvalidParameter("bad GF(2) hex '" + std::string(s) + "'");
    std::uint64_t v = 0;
    for (char c : s) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw InvalidParameter("bad GF(2) hex '" + std::string(s) + "'");
      v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return {dim, v};
  }

 private:
  std::uint64_t bits_ = 0;
  unsigned dim_ = 0;
};

/// Subspace of F_2^m kept in reduced row-echelon form: rows sorted by leading bit
/// (descending) and every leading bit cleared from all other rows.
class Gf2Subspace {
 public:
  explicit Gf2Subspace(unsigned dim = 1) : dim_(dim) {
    if (dim == 0 || dim > kMaxGf2Dim) throw InvalidParameter("GF(2) dimension must be in 1..64");
  }

  static Gf2Subspace full(unsigned dim) {
    Gf2Subspace s(dim);
    for (unsigned i = 0; i < dim; ++i) s.insert(Gf2Vector::unit(dim, i));
    return s;
  }

  unsigned dim() const noexcept { return dim_; }
  unsigned rank() const noexcept { return static_cast<unsigned>(rows_.size()); }
  bool spans_all() const noexcept { return rank() == dim_; }

  std::vector<Gf2Vector> basis() const {
    std::vector<Gf2Vector> out;
    out.reserve(rows_.size());
    for (auto r : rows_) out.emplace_back(dim_, r);
    return out;
  }
  const std::vector<std::uint64_t>& rows() const noexcept { return rows_; }

  std::uint64_t reduce(std::uint64_t x) const noexcept {
    for (auto r : rows_)
      if (x & leading(r)) x ^= r;
    return x;
  }

  bool contains(const Gf2Vector& x) const {
    check(x);
    return reduce(x.bits()) == 0;
  }

  /// Returns true when the rank grew.
  bool insert(const Gf2Vector& x) {
    check(x);
    std::uint64_t r = reduce(x.bits());
    if (r == 0) return false;
    std::uint64_t lead = leading(r);
    for (auto& row : rows_)
      if (row & lead) row ^= r;
    auto pos = std::find_if(rows_.begin(), rows_.end(), [&](std::uint64_t row) { return leading(row) < lead; });
    rows_.insert(pos, r);
    return true;
  }

  /// The element whose RREF coordinates are the bits of `index`.
  Gf2Vector element(std::uint64_t index) const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if ((index >> i) & 1u) v ^= rows_[i];
    return {dim_, v};
  }

  std::vector<Gf2Vector> elements() const {
    if (rank() > 24) throw SizeError("subspace too large to enumerate");
    std::vector<Gf2Vector> out;
    out.reserve(std::size_t{1} << rank());
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << rank()); ++i) out.push_back(element(i));
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Gf2Subspace&, const Gf2Subspace&) = default;

  std::string to_string() const {
    std::string out;
    for (auto& v : basis()) {
      if (!out.empty()) out += ',';
      out += v.hex();
    }
    return out;
  }

  static Gf2Subspace parse(std::string_view s, unsigned dim) {
    Gf2Subspace out(dim);
    while (!s.empty()) {
      auto comma = s.find(',');
      auto tok = s.substr(0, comma);
      if (!out.insert(Gf2Vector::from_hex(tok, dim))) throw InvalidParameter("dependent subspace basis");
      s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    }
    return out;
  }

 private:
  static std::uint64_t leading(std::uint64_t x) noexcept { return x ? std::uint64_t{1} << (63 - std::countl_zero(x)) : 0; }
  void check(const Gf2Vector& x) const {
    if (x.dim() != dim_) throw InvalidParameter("GF(2) dimension mismatch");
  }

  unsigned dim_;
  std::vector<std::uint64_t> rows_;
};

template <class Rng>
Gf2Vector random_vector(unsigned m, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, dim_mask(m));
  return {m, dist(rng)};
}

/// Each basis vector is drawn uniformly from outside the span of the previous ones
/// (rejection sampling, which is exactly uniform on the complement).
template <class Rng>
Gf2Subspace random_subspace(unsigned m, unsigned ell, Rng& rng) {
  if (m == 0 || m > kMaxGf2Dim) throw InvalidParameter("ambient dimension must be in 1..64");
  if (ell > m) throw InvalidParameter("subspace rank exceeds ambient dimension");
  Gf2Subspace s(m);
  while (s.rank() < ell) {
    Gf2Vector v = random_vector(m, rng);
    if (!s.contains(v)) s.insert(v);
  }
  return s;
}

inline Gf2Subspace span_of(std::span<const Gf2Vector> vectors, unsigned m) {
  Gf2Subspace s(m);
  for (auto& v : vectors) {
    if (v.dim() != m) throw InvalidParameter("mixed GF(2) dimensions");
    s.insert(v);
  }
  return s;
}

/// Coefficients c with sum_i c_i basis_i = target. Free (dependent) vectors get 0.
inline std::vector<std::uint8_t> coefficients_in_basis(const Gf2Vector& target, std::span<const Gf2Vector> basis) {
  const std::size_t n = basis.size();
  const std::size_t words = (n + 63) / 64;
  struct Row {
    std::uint64_t value = 0;
    std::vector<std::uint64_t> combo;
  };
  std::vector<Row> pivot(64);
  std::vector<bool> used(64, false);
  auto reduce = [&](Row& r) {
    for (int b = 63; b >= 0; --b) {
      if (!((r.value >> b) & 1u) || !used[b]) continue;
      r.value ^= pivot[b].value;
      for (std::size_t w = 0; w < words; ++w) r.combo[w] ^= pivot[b].combo[w];
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (basis[i].dim() != target.dim()) throw InvalidParameter("mixed GF(2) dimensions");
    Row r{basis[i].bits(), std::vector<std::uint64_t>(words, 0)};
    r.combo[i / 64] |= std::uint64_t{1} << (i % 64);
    reduce(r);
    if (r.value == 0) continue;
    int b = 63 - std::countl_zero(r.value);
    pivot[b] = std::move(r);
    used[b] = true;
  }
  Row t{target.bits(), std::vector<std::uint64_t>(words, 0)};
  reduce(t);
  if (t.value != 0) throw NotInSpan("target " + target.hex() + " is not in the span");
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (t.combo[i / 64] >> (i % 64)) & 1u;
  return out;
}

}  // namespace symcsp
