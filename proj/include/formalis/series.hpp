#ifndef FORMALIS_SERIES_HPP
#define FORMALIS_SERIES_HPP

#include <optional>

#include "formalis/poly.hpp"

namespace formalis {

/// Truncation of a power series in the distinguished series variable:
/// every term has series exponent in [0, order).
template <class K>
struct TruncSeriesT {
  PolyT<K> poly;
  int order = 1;

  friend bool operator==(const TruncSeriesT& a, const TruncSeriesT& b) {
    return a.order == b.order && a.poly == b.poly;
  }
  friend bool operator!=(const TruncSeriesT& a, const TruncSeriesT& b) { return !(a == b); }
};

using TruncSeries = TruncSeriesT<Rat>;

template <class K>
std::size_t series_var_index(const PolyT<K>& p) {
  auto idx = p.spec->series_index();
  if (!idx) throw precondition_error("variable spec declares no series variable");
  return *idx;
}

/// Drops all terms with series exponent >= order.  Negative series
/// exponents are rejected.
template <class K>
TruncSeriesT<K> truncate(const PolyT<K>& p, int order) {
  if (order < 1) throw precondition_error("truncation order must be positive");
  std::size_t sv = series_var_index(p);
  if (!p.is_zero() && min_degree_in(p, sv) < 0)
    throw precondition_error("negative series-variable exponent");
  PolyT<K> q(p.spec);
  for (const auto& t : p.terms)
    if (t.first.e[sv] < order) q.terms.push_back(t);
  return TruncSeriesT<K>{std::move(q), order};
}

template <class K>
TruncSeriesT<K> ts_add(const TruncSeriesT<K>& a, const TruncSeriesT<K>& b) {
  int order = std::min(a.order, b.order);
  return truncate(a.poly + b.poly, order);
}

template <class K>
TruncSeriesT<K> ts_sub(const TruncSeriesT<K>& a, const TruncSeriesT<K>& b) {
  int order = std::min(a.order, b.order);
  return truncate(a.poly - b.poly, order);
}

template <class K>
TruncSeriesT<K> ts_mul(const TruncSeriesT<K>& a, const TruncSeriesT<K>& b) {
  int order = std::min(a.order, b.order);
  return truncate(a.poly * b.poly, order);
}

/// Coefficient of t^i as a polynomial in the remaining variables
/// (same spec, series exponent zeroed).
template <class K>
PolyT<K> ts_coefficient(const TruncSeriesT<K>& s, int i) {
  return coefficient_of(s.poly, series_var_index(s.poly), static_cast<Exp>(i));
}

/// Lowest series order with a nonzero coefficient, or nullopt for 0.
template <class K>
std::optional<int> ts_low_order(const TruncSeriesT<K>& s) {
  if (s.poly.is_zero()) return std::nullopt;
  return static_cast<int>(min_degree_in(s.poly, series_var_index(s.poly)));
}

}  // namespace formalis

#endif
