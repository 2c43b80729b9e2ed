#ifndef FORMALIS_RATIONAL_HPP
#define FORMALIS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "formalis/errors.hpp"

namespace formalis {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational coefficients.  cpp_rational keeps the canonical form
/// gcd(|num|, den) = 1 with den > 0, which is exactly the invariant we need.
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return numerator(r); }
inline BigInt rat_den(const Rat& r) { return denominator(r); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

inline std::string rat_str(const Rat& r) { return r.str(); }

/// "3", "-3", "3/4".  Throws parse_error on anything else.
inline Rat rat_from_string(const std::string& s) {
  try {
    Rat r(s);
    return r;
  } catch (const std::exception&) {
    throw parse_error("invalid rational literal: " + s, 0);
  }
}

inline BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace formalis

#endif
