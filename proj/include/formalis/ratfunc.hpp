#ifndef FORMALIS_RATFUNC_HPP
#define FORMALIS_RATFUNC_HPP

#include <string>
#include <vector>

#include "formalis/rational.hpp"

namespace formalis {

/// Dense univariate polynomial over Q in the family parameter w.
/// No trailing zero coefficients; zero is the empty vector.
struct UPoly {
  std::vector<Rat> c;

  UPoly() = default;
  explicit UPoly(Rat constant) {
    if (constant != 0) c.push_back(std::move(constant));
  }

  bool is_zero() const { return c.empty(); }
  int deg() const { return int(c.size()) - 1; }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
};

inline UPoly upoly_w(Rat scale = Rat(1)) {
  UPoly p;
  p.c = {Rat(0), std::move(scale)};
  p.trim();
  return p;
}

inline bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }

inline UPoly operator+(const UPoly& a, const UPoly& b) {
  UPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

inline UPoly operator-(const UPoly& a) {
  UPoly r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

inline UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

inline UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  UPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

inline UPoly upoly_scale(const Rat& s, const UPoly& a) {
  if (s == 0) return UPoly();
  UPoly r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

/// Euclidean division a = q*b + r with deg r < deg b; b nonzero.
inline std::pair<UPoly, UPoly> upoly_divmod(UPoly a, const UPoly& b) {
  if (b.is_zero()) throw precondition_error("univariate division by zero");
  UPoly q;
  if (a.deg() >= b.deg()) q.c.assign(std::size_t(a.deg() - b.deg()) + 1, Rat(0));
  const Rat& lead = b.c.back();
  while (!a.is_zero() && a.deg() >= b.deg()) {
    int shift = a.deg() - b.deg();
    Rat coef = a.c.back() / lead;
    q.c[std::size_t(shift)] = coef;
    for (std::size_t i = 0; i < b.c.size(); ++i)
      a.c[std::size_t(shift) + i] -= coef * b.c[i];
    a.trim();
  }
  q.trim();
  return {std::move(q), std::move(a)};
}

/// Monic gcd.
inline UPoly upoly_gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = upoly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a = upoly_scale(Rat(1) / a.c.back(), a);
  return a;
}

inline Rat upoly_eval(const UPoly& p, const Rat& w0) {
  Rat acc(0);
  for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * w0 + p.c[i];
  return acc;
}

inline std::string upoly_str(const UPoly& p, const std::string& var = "w") {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = p.c.size(); i-- > 0;) {
    if (p.c[i] == 0) continue;
    Rat a = p.c[i];
    bool neg = a < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    Rat mag = neg ? Rat(-a) : a;
    if (i == 0) {
      out += rat_str(mag);
    } else {
      std::string mono = var + (i == 1 ? "" : "^" + std::to_string(i));
      out += (mag == 1) ? mono : rat_str(mag) + "*" + mono;
    }
  }
  return out;
}

/// Reduced fraction of univariate polynomials with monic denominator.
struct RatFunc {
  UPoly num;
  UPoly den;

  RatFunc() : den(Rat(1)) {}
  RatFunc(int v) : num(Rat(v)), den(Rat(1)) {}  // NOLINT: K(0), K(1) conversions
  explicit RatFunc(Rat v) : num(std::move(v)), den(Rat(1)) {}
  RatFunc(UPoly n, UPoly d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  bool is_zero() const { return num.is_zero(); }

  void normalize() {
    if (den.is_zero()) throw precondition_error("rational function with zero denominator");
    if (num.is_zero()) {
      den = UPoly(Rat(1));
      return;
    }
    UPoly g = upoly_gcd(num, den);
    if (g.deg() > 0) {
      num = upoly_divmod(num, g).first;
      den = upoly_divmod(den, g).first;
    }
    Rat lead = den.c.back();
    if (lead != 1) {
      num = upoly_scale(Rat(1) / lead, num);
      den = upoly_scale(Rat(1) / lead, den);
    }
  }
};

inline bool operator==(const RatFunc& a, const RatFunc& b) {
  return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num, a.den); }
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.num, a.den * b.den);
}
inline RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw precondition_error("division by the zero rational function");
  return RatFunc(a.num * b.den, a.den * b.num);
}
inline RatFunc& operator+=(RatFunc& a, const RatFunc& b) { return a = a + b; }
inline RatFunc& operator*=(RatFunc& a, const RatFunc& b) { return a = a * b; }

/// Multiplicity of the factor w in the (monic) denominator, by repeated
/// exact division.
inline int w_pole_order(const RatFunc& r) {
  int k = 0;
  while (std::size_t(k) < r.den.c.size() && r.den.c[std::size_t(k)] == 0) ++k;
  return k;
}

inline Rat ratfunc_eval(const RatFunc& r, const Rat& w0) {
  Rat d = upoly_eval(r.den, w0);
  if (d == 0) throw precondition_error("specialization hits a denominator zero");
  return upoly_eval(r.num, w0) / d;
}

inline std::string coeff_str(const RatFunc& r) {
  auto wrap = [](const std::string& s) {
    bool simple = s.find(' ') == std::string::npos && s.find('/') == std::string::npos;
    return simple ? s : "(" + s + ")";
  };
  if (r.den == UPoly(Rat(1))) {
    std::string n = upoly_str(r.num);
    return r.num.deg() <= 0 ? n : "(" + n + ")";
  }
  return wrap(upoly_str(r.num)) + "/" + wrap(upoly_str(r.den));
}

inline bool coeff_negative(const RatFunc& r) {
  return !r.num.is_zero() && r.num.c.back() < 0;
}

}  // namespace formalis

#endif
