#ifndef FORMALIS_POLY_HPP
#define FORMALIS_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "formalis/errors.hpp"
#include "formalis/rational.hpp"
#include "formalis/varspec.hpp"

namespace formalis {

using Exp = std::int32_t;

/// Exponent vector over a VarSpec.  Entries may be negative on invertible
/// variables only; that constraint lives in PolyT normalization.
struct Monomial {
  std::vector<Exp> e;

  explicit Monomial(std::size_t n = 0) : e(n, 0) {}
  explicit Monomial(std::vector<Exp> v) : e(std::move(v)) {}

  bool is_one() const {
    return std::all_of(e.begin(), e.end(), [](Exp x) { return x == 0; });
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

inline Exp checked_exp_add(Exp a, Exp b) {
  std::int64_t s = std::int64_t(a) + std::int64_t(b);
  if (s > std::numeric_limits<Exp>::max() || s < std::numeric_limits<Exp>::min())
    throw resource_cap_error("exponent overflow");
  return static_cast<Exp>(s);
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = checked_exp_add(a.e[i], b.e[i]);
  return r;
}

/// b / a, assuming divisibility was established by the caller.
inline Monomial mono_div(const Monomial& b, const Monomial& a) {
  Monomial r(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = checked_exp_add(b.e[i], -a.e[i]);
  return r;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.e.size(); ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

inline Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
  return r;
}

inline std::int64_t mono_degree(const Monomial& m) {
  std::int64_t d = 0;
  for (Exp x : m.e) d += x;
  return d;
}

/// Storage comparator: graded reverse lexicographic on the declared
/// variable sequence.  Total order on Laurent exponents as well.
inline bool grevlex_less(const Monomial& a, const Monomial& b) {
  std::int64_t da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = a.e.size(); i-- > 0;) {
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  }
  return false;
}

namespace detail {
template <class K>
inline bool kis_zero(const K& k) { return k == K(0); }
}  // namespace detail

/// Exact multivariate (Laurent) polynomial with coefficients in K.
/// Terms are kept strictly descending in the storage grevlex order, with no
/// zero coefficients; negative exponents appear only on invertible
/// variables.  Values are immutable in spirit: all operations are pure.
template <class K>
struct PolyT {
  using Term = std::pair<Monomial, K>;

  VarSpecPtr spec;
  std::vector<Term> terms;

  PolyT() = default;
  explicit PolyT(VarSpecPtr s) : spec(std::move(s)) {}

  bool is_zero() const { return terms.empty(); }

  static PolyT zero(VarSpecPtr s) { return PolyT(std::move(s)); }

  static PolyT constant(VarSpecPtr s, K c) {
    PolyT p(std::move(s));
    if (!detail::kis_zero(c)) p.terms.emplace_back(Monomial(p.spec->size()), std::move(c));
    return p;
  }

  static PolyT variable(VarSpecPtr s, std::size_t index, Exp power = 1) {
    if (index >= s->size()) throw precondition_error("variable index out of range");
    Monomial m(s->size());
    m.e[index] = power;
    std::vector<Term> t;
    t.emplace_back(std::move(m), K(1));
    return from_terms(std::move(s), std::move(t));
  }

  /// Normalizing constructor: merges duplicates, drops zeros, sorts,
  /// validates the Laurent constraint.
  static PolyT from_terms(VarSpecPtr s, std::vector<Term> in) {
    std::map<Monomial, K, decltype(&grevlex_less)> acc(&grevlex_less);
    for (auto& [m, c] : in) {
      if (m.e.size() != s->size()) throw precondition_error("monomial arity mismatch");
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(std::move(m), std::move(c));
      else
        it->second = it->second + c;
    }
    PolyT p(std::move(s));
    for (auto it = acc.rbegin(); it != acc.rend(); ++it) {
      if (detail::kis_zero(it->second)) continue;
      for (std::size_t i = 0; i < it->first.e.size(); ++i)
        if (it->first.e[i] < 0 && !p.spec->invertible(i))
          throw precondition_error("negative exponent on non-invertible variable " +
                                   p.spec->name(i));
      p.terms.emplace_back(it->first, it->second);
    }
    return p;
  }

  friend bool operator==(const PolyT& a, const PolyT& b) {
    if (!same_spec(a.spec, b.spec)) return false;
    return a.terms == b.terms;
  }
  friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }
};

using Poly = PolyT<Rat>;

template <class K>
PolyT<K> operator+(const PolyT<K>& a, const PolyT<K>& b) {
  require_same_spec(a.spec, b.spec, "poly addition");
  std::vector<typename PolyT<K>::Term> out;
  out.reserve(a.terms.size() + b.terms.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    if (a.terms[i].first == b.terms[j].first) {
      K c = a.terms[i].second + b.terms[j].second;
      if (!detail::kis_zero(c)) out.emplace_back(a.terms[i].first, std::move(c));
      ++i, ++j;
    } else if (grevlex_less(b.terms[j].first, a.terms[i].first)) {
      out.push_back(a.terms[i++]);
    } else {
      out.push_back(b.terms[j++]);
    }
  }
  for (; i < a.terms.size(); ++i) out.push_back(a.terms[i]);
  for (; j < b.terms.size(); ++j) out.push_back(b.terms[j]);
  PolyT<K> r(a.spec);
  r.terms = std::move(out);
  return r;
}

template <class K>
PolyT<K> operator-(const PolyT<K>& a) {
  PolyT<K> r = a;
  for (auto& t : r.terms) t.second = -t.second;
  return r;
}

template <class K>
PolyT<K> operator-(const PolyT<K>& a, const PolyT<K>& b) {
  return a + (-b);
}

template <class K>
PolyT<K> scalar_mul(const K& c, const PolyT<K>& p) {
  if (detail::kis_zero(c)) return PolyT<K>::zero(p.spec);
  PolyT<K> r = p;
  for (auto& t : r.terms) t.second = t.second * c;
  return r;
}

template <class K>
PolyT<K> term_mul(const Monomial& m, const K& c, const PolyT<K>& p) {
  if (detail::kis_zero(c)) return PolyT<K>::zero(p.spec);
  PolyT<K> r(p.spec);
  r.terms.reserve(p.terms.size());
  for (const auto& t : p.terms) r.terms.emplace_back(mono_mul(m, t.first), t.second * c);
  return r;
}

template <class K>
PolyT<K> operator*(const PolyT<K>& a, const PolyT<K>& b) {
  require_same_spec(a.spec, b.spec, "poly multiplication");
  std::map<Monomial, K, decltype(&grevlex_less)> acc(&grevlex_less);
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      Monomial m = mono_mul(ta.first, tb.first);
      K c = ta.second * tb.second;
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(std::move(m), std::move(c));
      else
        it->second = it->second + c;
    }
  PolyT<K> r(a.spec);
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (!detail::kis_zero(it->second)) r.terms.emplace_back(it->first, it->second);
  return r;
}

template <class K>
PolyT<K> pow_poly(const PolyT<K>& p, unsigned k) {
  PolyT<K> r = PolyT<K>::constant(p.spec, K(1));
  PolyT<K> base = p;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return r;
}

template <class K>
std::int64_t total_degree(const PolyT<K>& p) {
  std::int64_t d = 0;
  bool first = true;
  for (const auto& t : p.terms) {
    std::int64_t td = mono_degree(t.first);
    if (first || td > d) d = td;
    first = false;
  }
  return p.is_zero() ? 0 : d;
}

template <class K>
Exp degree_in(const PolyT<K>& p, std::size_t var) {
  Exp d = 0;
  bool first = true;
  for (const auto& t : p.terms) {
    if (first || t.first.e[var] > d) d = t.first.e[var];
    first = false;
  }
  return d;
}

template <class K>
Exp min_degree_in(const PolyT<K>& p, std::size_t var) {
  Exp d = 0;
  bool first = true;
  for (const auto& t : p.terms) {
    if (first || t.first.e[var] < d) d = t.first.e[var];
    first = false;
  }
  return d;
}

/// Degree of the homogeneous polynomial, or nullopt if not homogeneous.
/// The zero polynomial counts as homogeneous of any degree.
template <class K>
std::optional<std::int64_t> homogeneous_degree(const PolyT<K>& p) {
  if (p.is_zero()) return 0;
  std::int64_t d = mono_degree(p.terms.front().first);
  for (const auto& t : p.terms)
    if (mono_degree(t.first) != d) return std::nullopt;
  return d;
}

/// Terms of total degree exactly k.
template <class K>
PolyT<K> homogeneous_part(const PolyT<K>& p, std::int64_t k) {
  PolyT<K> r(p.spec);
  for (const auto& t : p.terms)
    if (mono_degree(t.first) == k) r.terms.push_back(t);
  return r;
}

/// Drops terms of total degree >= bound.
template <class K>
PolyT<K> truncate_total_degree(const PolyT<K>& p, std::int64_t bound) {
  PolyT<K> r(p.spec);
  for (const auto& t : p.terms)
    if (mono_degree(t.first) < bound) r.terms.push_back(t);
  return r;
}

template <class K>
PolyT<K> derivative(const PolyT<K>& p, std::size_t var) {
  std::vector<typename PolyT<K>::Term> out;
  for (const auto& t : p.terms) {
    Exp e = t.first.e[var];
    if (e == 0) continue;
    Monomial m = t.first;
    m.e[var] = checked_exp_add(e, -1);
    out.emplace_back(std::move(m), t.second * K(e));
  }
  return PolyT<K>::from_terms(p.spec, std::move(out));
}

/// Substitutes `value` for the variable `var`; requires nonnegative
/// exponents of `var` throughout p.
template <class K>
PolyT<K> substitute(const PolyT<K>& p, std::size_t var, const PolyT<K>& value) {
  require_same_spec(p.spec, value.spec, "substitution");
  Exp maxe = degree_in(p, var);
  if (min_degree_in(p, var) < 0)
    throw precondition_error("substitute: negative exponent on substituted variable");
  // power table
  std::vector<PolyT<K>> powers;
  powers.push_back(PolyT<K>::constant(p.spec, K(1)));
  for (Exp k = 1; k <= maxe; ++k) powers.push_back(powers.back() * value);
  PolyT<K> acc = PolyT<K>::zero(p.spec);
  for (const auto& t : p.terms) {
    Monomial m = t.first;
    Exp e = m.e[var];
    m.e[var] = 0;
    acc = acc + term_mul(m, t.second, powers[std::size_t(e)]);
  }
  return acc;
}

/// p(x_i + a_i): shifts every variable by the given constants.
template <class K>
PolyT<K> shift_point(const PolyT<K>& p, const std::vector<K>& a) {
  if (a.size() != p.spec->size()) throw precondition_error("shift arity mismatch");
  PolyT<K> r = p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (detail::kis_zero(a[i])) continue;
    PolyT<K> v = PolyT<K>::variable(p.spec, i) + PolyT<K>::constant(p.spec, a[i]);
    r = substitute(r, i, v);
  }
  return r;
}

/// Evaluates at a rational point.  Negative exponents require a nonzero
/// coordinate there.
template <class K>
K eval_at(const PolyT<K>& p, const std::vector<K>& a) {
  if (a.size() != p.spec->size()) throw precondition_error("eval arity mismatch");
  K acc(0);
  for (const auto& t : p.terms) {
    K v = t.second;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Exp e = t.first.e[i];
      if (e == 0) continue;
      if (e < 0) {
        if (detail::kis_zero(a[i]))
          throw precondition_error("evaluation of negative power at zero");
        K inv = K(1) / a[i];
        for (Exp k = 0; k < -e; ++k) v = v * inv;
      } else {
        for (Exp k = 0; k < e; ++k) v = v * a[i];
      }
    }
    acc = acc + v;
  }
  return acc;
}

/// Collects the coefficient of var^k as a polynomial with that exponent
/// zeroed out (same spec).
template <class K>
PolyT<K> coefficient_of(const PolyT<K>& p, std::size_t var, Exp k) {
  PolyT<K> r(p.spec);
  std::vector<typename PolyT<K>::Term> out;
  for (const auto& t : p.terms)
    if (t.first.e[var] == k) {
      Monomial m = t.first;
      m.e[var] = 0;
      out.emplace_back(std::move(m), t.second);
    }
  return PolyT<K>::from_terms(p.spec, std::move(out));
}

/// Minimal monomial m in the invertible variables with m*p free of
/// negative exponents.  Returns (m*p, m).
template <class K>
std::pair<PolyT<K>, Monomial> laurent_clear(const PolyT<K>& p) {
  Monomial m(p.spec->size());
  for (std::size_t i = 0; i < p.spec->size(); ++i) {
    if (!p.spec->invertible(i)) continue;
    Exp low = p.is_zero() ? 0 : min_degree_in(p, i);
    if (low < 0) m.e[i] = -low;
  }
  return {term_mul(m, K(1), p), m};
}

/// Rebuilds p over another spec, matching variables by name.  Exponents on
/// variables missing from the target must be zero.
template <class K>
PolyT<K> re_spec(const PolyT<K>& p, const VarSpecPtr& target) {
  std::vector<std::optional<std::size_t>> dest(p.spec->size());
  for (std::size_t i = 0; i < p.spec->size(); ++i) dest[i] = target->index_of(p.spec->name(i));
  std::vector<typename PolyT<K>::Term> out;
  for (const auto& t : p.terms) {
    Monomial m(target->size());
    for (std::size_t i = 0; i < p.spec->size(); ++i) {
      if (t.first.e[i] == 0) continue;
      if (!dest[i])
        throw precondition_error("re_spec: variable " + p.spec->name(i) +
                                 " carries exponents but is absent from the target ring");
      m.e[*dest[i]] = t.first.e[i];
    }
    out.emplace_back(std::move(m), t.second);
  }
  return PolyT<K>::from_terms(target, std::move(out));
}

// ---------------------------------------------------------------------------
// printing

inline std::string coeff_str(const Rat& c) { return rat_str(c); }
inline bool coeff_negative(const Rat& c) { return c < 0; }

template <class K>
std::string monomial_str(const VarSpec& spec, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.e.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += spec.name(i);
    if (m.e[i] != 1) out += "^" + std::to_string(m.e[i]);
  }
  return out;
}

/// Canonical text form; parse(to_string(p)) == p for K = Rat.
template <class K>
std::string to_string(const PolyT<K>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms) {
    K c = t.second;
    bool neg = coeff_negative(c);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    K a = neg ? K(-c) : c;
    std::string ms = monomial_str<K>(*p.spec, t.first);
    if (ms.empty()) {
      out += coeff_str(a);
    } else if (a == K(1)) {
      out += ms;
    } else {
      out += coeff_str(a) + "*" + ms;
    }
    first = false;
  }
  return out;
}

template <class K>
std::ostream& operator<<(std::ostream& os, const PolyT<K>& p) {
  return os << to_string(p);
}

}  // namespace formalis

#endif
