// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "symcsp/error.hpp"

namespace symcsp {

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
using ExactRatio = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline ExactRatio ratio(long long num, long long den = 1) {
  if (den == 0) throw InvalidParameter("zero denominator");
  return ExactRatio(num, den);
}

/// Always "num/den", including "1/1" and "0/1".
inline std::string to_string(const ExactRatio& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const ExactRatio& r) { return r.convert_to<double>(); }

namespace detail {

inline BigInt parse_bigint(std::string_view s) {
  if (s.empty()) throw InvalidParameter("empty integer");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw InvalidParameter("bad integer '" + std::string(s) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw InvalidParameter("bad integer '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace detail

/// Accepts "p/q", "p" and plain decimals such as "0.25" or "-1.5".
inline ExactRatio parse_ratio(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_bigint(s.substr(0, slash));
    BigInt den = detail::parse_bigint(s.substr(slash + 1));
    if (den == 0) throw InvalidParameter("zero denominator in '" + std::string(s) + "'");
    return ExactRatio(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    std::string whole(s.substr(0, dot));
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt ip = detail::parse_bigint(whole);
    BigInt fp = frac.empty() ? BigInt(0) : detail::parse_bigint(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))
      throw InvalidParameter("bad decimal '" + std::string(s) + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    ExactRatio r(boost::multiprecision::abs(ip) * scale + fp, scale);
    return neg ? ExactRatio(-r) : r;
  }
  return ExactRatio(detail::parse_bigint(s));
}

}  // namespace symcsp
