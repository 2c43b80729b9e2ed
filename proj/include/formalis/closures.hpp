#ifndef FORMALIS_CLOSURES_HPP
#define FORMALIS_CLOSURES_HPP

#include <functional>
#include <optional>

#include "formalis/series.hpp"
#include "formalis/towers.hpp"

namespace formalis {

/// A closed ordinary subscheme of the distinguished open D(f): generators
/// of the defining ideal J, lifted to the polynomial model ring.
struct OpenSubschemeSpec {
  Poly f;
  Ideal J;
};

inline OpenSubschemeSpec make_open_subscheme(Poly f, Ideal J) {
  if (f.is_zero()) throw precondition_error("open subscheme: f must be nonzero");
  require_same_spec(f.spec, J.spec, "open subscheme");
  return OpenSubschemeSpec{std::move(f), std::move(J)};
}

/// Closure ideal of Y ⊆ D(f) at one tower level: the kernel of
/// P/I_level -> ((P/I_level)/J)_f, i.e. saturate(J + I_level, f).
inline Ideal ordinary_closure(const Tower& T, const OpenSubschemeSpec& Y, std::size_t level,
                              const GbOptions& opts = {}) {
  require_same_spec(T.spec, Y.J.spec, "ordinary closure");
  const Ideal& I = T.level(level);
  return saturate(ideal_add(Y.J, I), Y.f, opts);
}

/// Levelwise closures of a chain of ordinary subschemes, assembled into the
/// pseudo-closure presentation.
struct ClosureChain {
  std::vector<Ideal> levels;
  std::optional<std::size_t> stabilized_at;  // 1-based; nullopt if not reached
  // projections[{M, N}] = reduced basis of levels[N-1] + I_M (M <= N)
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> projections;
};

inline ClosureChain pseudo_closure(const Tower& T, const std::vector<OpenSubschemeSpec>& Y_chain,
                                   const GbOptions& opts = {}) {
  if (Y_chain.size() != T.depth())
    throw precondition_error("pseudo_closure: one open subscheme per tower level");
  ClosureChain out;
  for (std::size_t i = 1; i <= T.depth(); ++i)
    out.levels.push_back(ordinary_closure(T, Y_chain[i - 1], i, opts));
  for (std::size_t i = 0; i + 1 < out.levels.size(); ++i)
    if (!contains(out.levels[i], out.levels[i + 1], opts))
      throw precondition_error("pseudo_closure: closure chain is not descending at level " +
                               std::to_string(i + 1));
  // stabilization: minimal s with levels[s] = ... = levels[depth]
  std::size_t s = out.levels.size();
  while (s >= 2 && ideal_equal(out.levels[s - 2], out.levels[s - 1], opts)) --s;
  if (s < out.levels.size()) out.stabilized_at = s;
  for (std::size_t M = 1; M <= T.depth(); ++M)
    for (std::size_t N = M; N <= T.depth(); ++N)
      out.projections[{M, N}] =
          reduced_basis(ideal_add(out.levels[N - 1], T.level(M)), opts);
  return out;
}

// ---------------------------------------------------------------------------
// one-variable inversion

/// Coefficient in the fraction ring Q[x^pm, base^-1]: num / base^den_pow.
/// When base is a monomial the denominator is cancelled into the Laurent
/// numerator and den_pow stays 0.
struct FracCoeff {
  Poly num;
  int den_pow = 0;
};

struct MonomialInverse {
  Poly base;                      // the lowest coefficient f_n
  int n = 0;                      // lowest t-order of f
  int order = 0;                  // coefficients computed for t^0..t^{order-1}
  std::vector<FracCoeff> coeffs;  // g_i, i < order
  VarSpecPtr spec;

  /// As a plain Laurent series; requires all denominators cancelled.
  TruncSeries as_series() const {
    std::size_t sv = *spec->series_index();
    Poly acc = Poly::zero(spec);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i].den_pow != 0)
        throw precondition_error("inverse has a non-monomial symbolic denominator");
      Monomial ti(spec->size());
      ti.e[sv] = static_cast<Exp>(i);
      acc = acc + term_mul(ti, Rat(1), coeffs[i].num);
    }
    return TruncSeries{acc, order};
  }
};

namespace detail {

inline bool is_monomial(const Poly& p) { return p.terms.size() == 1; }

/// Exact division of p by the monomial c*x^m (x invertible as needed).
inline Poly monomial_divide(const Poly& p, const Poly& mono) {
  const auto& [m, c] = mono.terms.front();
  Monomial inv(m.e.size());
  for (std::size_t i = 0; i < m.e.size(); ++i) inv.e[i] = checked_exp_add(0, -m.e[i]);
  return term_mul(inv, Rat(1) / c, p);
}

}  // namespace detail

/// The inversion recursion g_0 = f_n^{-1},
/// g_m = -(sum_{j<m} g_j f_{n+m-j}) / f_n, giving f*g = t^n mod t^N.
inline MonomialInverse invert_to_monomial(const TruncSeries& f, int N) {
  if (f.poly.is_zero()) throw precondition_error("invert_to_monomial: f must be nonzero");
  if (N < 1) throw precondition_error("invert_to_monomial: N must be positive");
  const VarSpecPtr& spec = f.poly.spec;
  std::size_t sv = series_var_index(f.poly);
  int n = *ts_low_order(f);
  Poly base = ts_coefficient(f, n);
  bool base_monomial = detail::is_monomial(base);

  std::vector<Poly> fcoeff;  // f_{n+k} for k = 0..N-1
  for (int k = 0; k < N; ++k) fcoeff.push_back(coefficient_of(f.poly, sv, Exp(n + k)));

  MonomialInverse inv;
  inv.base = base;
  inv.n = n;
  inv.spec = spec;
  inv.order = std::max(N - n, 1);

  std::vector<FracCoeff> g;
  if (base_monomial)
    g.push_back({detail::monomial_divide(Poly::constant(spec, Rat(1)), base), 0});
  else
    g.push_back({Poly::constant(spec, Rat(1)), 1});

  for (int m = 1; m < inv.order; ++m) {
    int K = 0;
    for (const auto& gc : g) K = std::max(K, gc.den_pow);
    Poly acc = Poly::zero(spec);
    for (int j = 0; j < m; ++j) {
      int shift = m - j;  // f_{n + m - j}
      if (shift >= N) continue;
      const Poly& fc = fcoeff[std::size_t(shift)];
      if (fc.is_zero() || g[std::size_t(j)].num.is_zero()) continue;
      Poly scaled = g[std::size_t(j)].num * fc;
      if (K > g[std::size_t(j)].den_pow)
        scaled = scaled * pow_poly(base, unsigned(K - g[std::size_t(j)].den_pow));
      acc = acc + scaled;
    }
    acc = -acc;
    if (base_monomial) {
      // divide by base^{K+1} exactly
      Poly num = acc;
      for (int k = 0; k <= K; ++k) num = detail::monomial_divide(num, base);
      g.push_back({std::move(num), 0});
    } else {
      g.push_back({std::move(acc), K + 1});
    }
  }
  inv.coeffs = std::move(g);
  return inv;
}

/// Exact check that f * g = t^n mod t^N, over the common denominator
/// base^K.  Used by tests and the CLI.
inline bool verify_inverse(const TruncSeries& f, const MonomialInverse& inv, int N) {
  std::size_t sv = series_var_index(f.poly);
  int K = 0;
  for (const auto& gc : inv.coeffs) K = std::max(K, gc.den_pow);
  Poly baseK = pow_poly(inv.base, unsigned(K));
  for (int m = 0; m < N; ++m) {
    Poly acc = Poly::zero(f.poly.spec);
    for (int j = 0; j <= m - inv.n && j < int(inv.coeffs.size()); ++j) {
      Poly fc = coefficient_of(f.poly, sv, Exp(m - j));
      if (fc.is_zero()) continue;
      Poly scaled = inv.coeffs[std::size_t(j)].num * fc;
      if (K > inv.coeffs[std::size_t(j)].den_pow)
        scaled = scaled * pow_poly(inv.base, unsigned(K - inv.coeffs[std::size_t(j)].den_pow));
      acc = acc + scaled;
    }
    Poly expect = (m == inv.n) ? baseK : Poly::zero(f.poly.spec);
    if (!(acc == expect)) return false;
  }
  return true;
}

/// Truncated closure ideal of V(f) ∩ D(invertibles) inside the polynomial
/// model: with (q, v) = laurent_clear(f mod t^N), computes
/// saturate((q, t^N), prod of invertible variables).
inline Ideal line_closure(const TruncSeries& f, int N, const GbOptions& opts = {}) {
  if (f.poly.is_zero()) throw precondition_error("line_closure: f must be nonzero");
  TruncSeries fN = truncate(f.poly, N);
  auto [q, mono] = laurent_clear(fN.poly);
  VarSpecPtr model = polynomial_spec(f.poly.spec);
  std::size_t sv = *model->series_index();
  Poly tN = PolyT<Rat>::variable(model, sv, Exp(N));
  Ideal I = make_ideal(model, {re_spec(q, model), tN});
  Poly sat_by = Poly::constant(model, Rat(1));
  for (auto i : f.poly.spec->invertible_indices())
    sat_by = sat_by * PolyT<Rat>::variable(model, *model->index_of(f.poly.spec->name(i)));
  return saturate(I, sat_by, opts);
}

// ---------------------------------------------------------------------------
// the explicit no-closure series laboratory

/// y + sum_{1 <= i < N} a_i x^{-i} t^i with |a_i| strictly increasing and
/// strictly growing ratios (the finite-depth proxy for ratio divergence).
inline TruncSeries counterexample_series(const std::function<Rat(int)>& rule, int N,
                                         VarSpecPtr spec = nullptr) {
  if (N < 1) throw precondition_error("counterexample_series: N must be positive");
  if (!spec) spec = make_varspec({"x", "y", "t"}, {"x"}, std::string("t"));
  auto xi = spec->index_of("x"), yi = spec->index_of("y"), ti = spec->index_of("t");
  if (!xi || !yi || !ti) throw precondition_error("counterexample_series: ring must have x, y, t");
  std::vector<Rat> a(std::size_t(N), Rat(0));
  for (int i = 1; i < N; ++i) {
    a[std::size_t(i)] = rule(i);
    if (a[std::size_t(i)] == 0)
      throw precondition_error("counterexample_series: a_" + std::to_string(i) + " must be nonzero");
  }
  for (int i = 2; i < N; ++i)
    if (!(rat_abs(a[std::size_t(i)]) > rat_abs(a[std::size_t(i - 1)])))
      throw precondition_error("counterexample_series: |a_" + std::to_string(i) +
                               "| does not exceed |a_" + std::to_string(i - 1) + "|");
  for (int i = 3; i < N; ++i) {
    Rat r_prev = rat_abs(a[std::size_t(i - 1)]) / rat_abs(a[std::size_t(i - 2)]);
    Rat r_cur = rat_abs(a[std::size_t(i)]) / rat_abs(a[std::size_t(i - 1)]);
    if (!(r_cur > r_prev))
      throw precondition_error("counterexample_series: ratio |a_" + std::to_string(i) +
                               "|/|a_" + std::to_string(i - 1) + "| does not grow");
  }
  std::vector<Poly::Term> terms;
  Monomial ym(spec->size());
  ym.e[*yi] = 1;
  terms.emplace_back(std::move(ym), Rat(1));
  for (int i = 1; i < N; ++i) {
    Monomial m(spec->size());
    m.e[*xi] = Exp(-i);
    m.e[*ti] = Exp(i);
    terms.emplace_back(std::move(m), a[std::size_t(i)]);
  }
  return TruncSeries{Poly::from_terms(spec, std::move(terms)), N};
}

// ---------------------------------------------------------------------------
// d/e/D/E profiles

constexpr std::int64_t kProfileInf = std::numeric_limits<std::int64_t>::max();

/// The four exponent profiles of g = sum g_i t^i:
///   d_i: minimal x-exponent of g_i,
///   e_i: minimal y-exponent among terms of g_i with x-exponent d_i,
///   D_i = min{ d_{i-j} - j : 1 <= j <= i },
///   E_i = min{ e_{i-j} : the minimum above is attained at j }.
/// Empty minima are reported as the +inf sentinel.
struct DEProfile {
  std::vector<std::int64_t> d, e, D, E;

  bool defined(std::size_t idx, const std::vector<std::int64_t>& v) const {
    return idx < v.size() && v[idx] != kProfileInf;
  }
};

inline DEProfile de_profile(const TruncSeries& g, int N) {
  const VarSpecPtr& spec = g.poly.spec;
  auto xi = spec->index_of("x"), yi = spec->index_of("y");
  if (!xi || !yi) throw precondition_error("de_profile: ring must have x and y");
  std::size_t sv = series_var_index(g.poly);
  DEProfile P;
  for (int i = 0; i < N; ++i) {
    Poly gi = coefficient_of(g.poly, sv, Exp(i));
    if (gi.is_zero()) {
      P.d.push_back(kProfileInf);
      P.e.push_back(kProfileInf);
    } else {
      Exp dmin = min_degree_in(gi, *xi);
      std::int64_t emin = kProfileInf;
      for (const auto& t : gi.terms)
        if (t.first.e[*xi] == dmin) emin = std::min<std::int64_t>(emin, t.first.e[*yi]);
      P.d.push_back(dmin);
      P.e.push_back(emin);
    }
  }
  for (int i = 0; i < N; ++i) {
    std::int64_t D = kProfileInf, E = kProfileInf;
    for (int j = 1; j <= i; ++j) {
      if (P.d[std::size_t(i - j)] == kProfileInf) continue;
      std::int64_t cand = P.d[std::size_t(i - j)] - j;
      if (cand < D) {
        D = cand;
        E = P.e[std::size_t(i - j)];
      } else if (cand == D) {
        E = std::min(E, P.e[std::size_t(i - j)]);
      }
    }
    P.D.push_back(D);
    P.E.push_back(E);
  }
  return P;
}

/// Overload validating that f and g share a ring; the profile itself is a
/// function of g alone.
inline DEProfile de_profile(const TruncSeries& f, const TruncSeries& g, int N) {
  require_same_spec(f.poly.spec, g.poly.spec, "de_profile");
  return de_profile(g, N);
}

// ---------------------------------------------------------------------------
// greedy search for polynomial multiples

/// The first uncancellable term: a negative-x, y-degree-zero term of the
/// forced part h'_i.  Re-checkable against the inputs.
struct ObstructionCertificate {
  int order = 0;
  Monomial term;
  Rat coeff;
  DEProfile profile;
};

struct MultipleSearchResult {
  std::optional<TruncSeries> g;                     // success: f*g polynomial mod t^N
  std::optional<ObstructionCertificate> obstruction;
  DEProfile profile;                                // profile of the constructed g
};

/// Canonical-branch greedy construction: g_0 = seed; at each order the
/// negative-x part of f_0*g_i must cancel the negative-x part of
/// h'_i = sum_{j>=1} f_j g_{i-j}; the free polynomial part of g_i is zero.
/// A y-degree-zero negative-x term in h'_i is an obstruction.
inline MultipleSearchResult search_polynomial_multiple(const TruncSeries& f, const Poly& seed,
                                                       int N) {
  const VarSpecPtr& spec = f.poly.spec;
  require_same_spec(spec, seed.spec, "search_polynomial_multiple");
  auto xig = spec->index_of("x");
  auto yig = spec->index_of("y");
  if (!xig || !yig)
    throw precondition_error("search_polynomial_multiple: ring must have x and y");
  std::size_t xi = *xig, yi = *yig;
  std::size_t sv = series_var_index(f.poly);

  Poly f0 = coefficient_of(f.poly, sv, 0);
  if (!f0.is_zero() && min_degree_in(f0, xi) < 0)
    throw precondition_error("search_polynomial_multiple: t^0 coefficient must be polynomial");
  if (!seed.is_zero() && (min_degree_in(seed, xi) < 0 || min_degree_in(seed, sv) != 0 ||
                          degree_in(seed, sv) != 0))
    throw precondition_error("search_polynomial_multiple: seed must lie in Q[x, y]");

  // coefficient of the pure y monomial of f_0 (the cancelling handle)
  Rat mu(0);
  for (const auto& t : f0.terms) {
    bool pure_y = t.first.e[yi] == 1;
    for (std::size_t k = 0; k < spec->size() && pure_y; ++k)
      if (k != yi && t.first.e[k] != 0) pure_y = false;
    if (pure_y) mu = t.second;
  }

  std::vector<Poly> fc;  // f_1..f_{N-1}
  for (int k = 0; k < N; ++k) fc.push_back(coefficient_of(f.poly, sv, Exp(k)));
  std::vector<Poly> g{seed};

  auto negative_part = [&](const Poly& p) {
    Poly out(spec);
    for (const auto& t : p.terms)
      if (t.first.e[xi] < 0) out.terms.push_back(t);
    return out;
  };

  for (int i = 1; i < N; ++i) {
    Poly hprime = Poly::zero(spec);
    for (int j = 1; j <= i; ++j)
      if (!fc[std::size_t(j)].is_zero() && !g[std::size_t(i - j)].is_zero())
        hprime = hprime + fc[std::size_t(j)] * g[std::size_t(i - j)];

    Poly gi = Poly::zero(spec);
    Poly work = negative_part(hprime);
    long guard = 0;
    while (!work.is_zero()) {
      if (++guard > 100000)
        throw resource_cap_error("search_polynomial_multiple: cancellation did not terminate");
      // most negative x, then lowest y
      const Poly::Term* pick = &work.terms.front();
      for (const auto& t : work.terms) {
        if (t.first.e[xi] < pick->first.e[xi] ||
            (t.first.e[xi] == pick->first.e[xi] && t.first.e[yi] < pick->first.e[yi]))
          pick = &t;
      }
      if (pick->first.e[yi] == 0) {
        MultipleSearchResult res;
        DEProfile prof = de_profile(TruncSeries{[&] {
                                                  Poly acc = Poly::zero(spec);
                                                  for (std::size_t k = 0; k < g.size(); ++k) {
                                                    Monomial tm(spec->size());
                                                    tm.e[sv] = Exp(k);
                                                    acc = acc + term_mul(tm, Rat(1), g[k]);
                                                  }
                                                  return acc;
                                                }(),
                                                i + 1},
                                    i + 1);
        res.obstruction = ObstructionCertificate{i, pick->first, pick->second, prof};
        res.profile = prof;
        return res;
      }
      if (mu == 0)
        throw precondition_error(
            "search_polynomial_multiple: t^0 coefficient lacks a pure y term");
      Monomial sm = pick->first;
      sm.e[yi] = checked_exp_add(sm.e[yi], -1);
      Rat sc = -pick->second / mu;
      gi = gi + Poly::from_terms(spec, {{sm, sc}});
      work = negative_part(work + term_mul(sm, sc, f0));
    }
    g.push_back(std::move(gi));
  }

  Poly acc = Poly::zero(spec);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Monomial tm(spec->size());
    tm.e[sv] = Exp(k);
    acc = acc + term_mul(tm, Rat(1), g[k]);
  }
  TruncSeries gs{acc, N};
  // the product must be polynomial below t^N
  Poly prod = truncate(f.poly * gs.poly, N).poly;
  if (!prod.is_zero() && min_degree_in(prod, xi) < 0)
    throw internal_error("search_polynomial_multiple: residual negative part survived");
  MultipleSearchResult res;
  res.profile = de_profile(gs, N);
  res.g = std::move(gs);
  return res;
}

// ---------------------------------------------------------------------------
// saturation profiles

struct SaturationProfile {
  int M = 0;
  int N_max = 0;
  std::vector<Ideal> levels;                   // J_N for N = 1..N_max
  std::vector<std::vector<Poly>> projections;  // reduced basis of J_N + (t^M), N >= M
  std::vector<bool> strict_steps;              // projection N -> N+1 strictly decreasing
  std::optional<int> stabilized_at;            // first N with all later projections equal
};

/// For each N computes J_N = saturate((clear(f mod t^N), t^N), invertibles)
/// in the polynomial model and the projections J_N + (t^M); verifies the
/// projections are non-increasing in N.
inline SaturationProfile saturation_profile(const TruncSeries& f, int N_max, int M,
                                            const GbOptions& opts = {}) {
  if (M < 1 || M > N_max) throw precondition_error("saturation_profile: need 1 <= M <= N_max");
  SaturationProfile out;
  out.M = M;
  out.N_max = N_max;
  for (int N = 1; N <= N_max; ++N) out.levels.push_back(line_closure(f, N, opts));
  VarSpecPtr model = out.levels.front().spec;
  std::size_t sv = *model->series_index();
  Poly tM = PolyT<Rat>::variable(model, sv, Exp(M));
  Ideal tM_ideal = make_ideal(model, {tM});

  for (std::size_t i = 0; i + 1 < out.levels.size(); ++i)
    if (!contains(out.levels[i], out.levels[i + 1], opts))
      throw internal_error("saturation_profile: closure levels failed to descend");

  std::vector<Ideal> proj_ideals;
  for (int N = M; N <= N_max; ++N) {
    Ideal p = ideal_add(out.levels[std::size_t(N - 1)], tM_ideal);
    out.projections.push_back(reduced_basis(p, opts));
    proj_ideals.push_back(std::move(p));
  }
  for (std::size_t k = 0; k + 1 < proj_ideals.size(); ++k) {
    if (!contains(proj_ideals[k], proj_ideals[k + 1], opts))
      throw internal_error("saturation_profile: projections are not non-increasing");
    out.strict_steps.push_back(out.projections[k] != out.projections[k + 1]);
  }
  for (std::size_t k = 0; k < out.projections.size(); ++k) {
    bool stable = true;
    for (std::size_t j = k; j + 1 < out.projections.size(); ++j)
      if (out.projections[j] != out.projections[j + 1]) stable = false;
    if (stable) {
      out.stabilized_at = M + int(k);
      break;
    }
  }
  return out;
}

}  // namespace formalis

#endif
