#ifndef FORMALIS_FOLIATIONS_HPP
#define FORMALIS_FOLIATIONS_HPP

#include <array>

#include "formalis/groebner.hpp"
#include "formalis/ratfunc.hpp"

namespace formalis {

inline VarSpecPtr projective_spec() { return make_varspec({"x", "y", "z"}); }

/// Degree-m homogeneous one-form on P^2 satisfying the Euler relation
/// x*w1 + y*w2 + z*w3 = 0 exactly.
struct PfaffForm {
  int m = 0;
  Poly w1, w2, w3;
};

inline PfaffForm make_pfaff(int m, Poly w1, Poly w2, Poly w3) {
  const VarSpecPtr& spec = w1.spec;
  require_same_spec(spec, w2.spec, "pfaff form");
  require_same_spec(spec, w3.spec, "pfaff form");
  if (spec->size() != 3) throw precondition_error("pfaff form lives on x, y, z");
  for (const Poly* w : {&w1, &w2, &w3}) {
    auto d = homogeneous_degree(*w);
    if (!d || (!w->is_zero() && *d != m))
      throw precondition_error("pfaff component not homogeneous of degree " + std::to_string(m) +
                               ": " + to_string(*w));
  }
  Poly residue = PolyT<Rat>::variable(spec, 0) * w1 + PolyT<Rat>::variable(spec, 1) * w2 +
                 PolyT<Rat>::variable(spec, 2) * w3;
  if (!residue.is_zero())
    throw precondition_error("Euler relation fails, residue " + to_string(residue));
  return PfaffForm{m, std::move(w1), std::move(w2), std::move(w3)};
}

/// (x^{m-1} z - y^m) dx + (y^{m-1} x - z^m) dy + (z^{m-1} y - x^m) dz.
inline PfaffForm jouanolou_form(int m) {
  if (m < 2) throw precondition_error("jouanolou_form needs m >= 2");
  VarSpecPtr s = projective_spec();
  Poly x = PolyT<Rat>::variable(s, 0), y = PolyT<Rat>::variable(s, 1),
       z = PolyT<Rat>::variable(s, 2);
  auto P = [&](const Poly& v, int k) { return pow_poly(v, unsigned(k)); };
  Poly w1 = P(x, m - 1) * z - P(y, m);
  Poly w2 = P(y, m - 1) * x - P(z, m);
  Poly w3 = P(z, m - 1) * y - P(x, m);
  return make_pfaff(m, std::move(w1), std::move(w2), std::move(w3));
}

struct IntegrabilityResult {
  bool integrable = false;
  Poly residual;  // the dx^dy^dz coefficient of d(omega) ^ omega
};

/// d(omega) ^ omega as a single 3-form coefficient:
///   w3*(d w2/dx - d w1/dy) + w1*(d w3/dy - d w2/dz) - w2*(d w3/dx - d w1/dz).
inline IntegrabilityResult check_integrability(const Poly& w1, const Poly& w2, const Poly& w3) {
  const VarSpecPtr& s = w1.spec;
  Poly a = derivative(w2, 0) - derivative(w1, 1);
  Poly b = derivative(w3, 1) - derivative(w2, 2);
  Poly c = derivative(w3, 0) - derivative(w1, 2);
  Poly residual = w3 * a + w1 * b - w2 * c;
  (void)s;
  return IntegrabilityResult{residual.is_zero(), std::move(residual)};
}

inline IntegrabilityResult check_integrability(const PfaffForm& w) {
  return check_integrability(w.w1, w.w2, w.w3);
}

/// Components of omega ^ df.
struct TwoForm {
  Poly c_xy, c_yz, c_xz;
};

inline TwoForm omega_wedge_df(const Poly& w1, const Poly& w2, const Poly& w3, const Poly& f) {
  Poly fx = derivative(f, 0), fy = derivative(f, 1), fz = derivative(f, 2);
  return TwoForm{w1 * fy - w2 * fx, w2 * fz - w3 * fy, w1 * fz - w3 * fx};
}

inline TwoForm omega_wedge_df(const PfaffForm& w, const Poly& f) {
  return omega_wedge_df(w.w1, w.w2, w.w3, f);
}

// ---------------------------------------------------------------------------
// divisibility of series by total degree

/// Exact polynomial division by a single divisor; nullopt when not
/// divisible.
inline std::optional<Poly> exact_divide(const Poly& g, const Poly& f) {
  if (f.is_zero()) throw precondition_error("exact division by zero");
  MonomialOrder ord = default_order(g.spec);
  GroebnerBasis single;
  single.order = ord;
  single.basis = {f};
  auto cert = divide_with_certificate(g, single);
  if (!cert.remainder.is_zero()) return std::nullopt;
  return cert.cofactors[0];
}

/// f divides g as power series modulo total degree N, decided by
/// layer-by-layer division of homogeneous parts with remainder tracking.
inline bool divides_series(const Poly& g, const Poly& f, std::int64_t N) {
  if (truncate_total_degree(f, N).is_zero())
    throw precondition_error("series divisor vanishes below the truncation degree");
  std::int64_t ford = 0;
  {
    bool first = true;
    for (const auto& t : f.terms) {
      std::int64_t d = mono_degree(t.first);
      if (first || d < ford) ford = d;
      first = false;
    }
  }
  Poly flow = homogeneous_part(f, ford);
  Poly h = truncate_total_degree(g, N);
  while (!h.is_zero()) {
    std::int64_t d0 = mono_degree(h.terms.back().first);
    for (const auto& t : h.terms) d0 = std::min(d0, mono_degree(t.first));
    if (d0 >= N) return true;
    if (d0 < ford) return false;
    auto q = exact_divide(homogeneous_part(h, d0), flow);
    if (!q) return false;
    h = truncate_total_degree(h - *q * f, N);
  }
  return true;
}

/// f | omega ^ df modulo total degree N (all three components).
inline bool is_formal_separatrix(const Poly& w1, const Poly& w2, const Poly& w3, const Poly& f,
                                 std::int64_t N) {
  TwoForm T = omega_wedge_df(w1, w2, w3, f);
  return divides_series(T.c_xy, f, N) && divides_series(T.c_yz, f, N) &&
         divides_series(T.c_xz, f, N);
}

inline bool is_formal_separatrix(const PfaffForm& w, const Poly& f, std::int64_t N) {
  return is_formal_separatrix(w.w1, w.w2, w.w3, f, N);
}

/// Exact homogeneous divisibility f | omega ^ df (the degree-level
/// condition satisfied by the lowest homogeneous part of a separatrix).
inline bool homogeneous_solution_check(const PfaffForm& w, const Poly& f) {
  TwoForm T = omega_wedge_df(w, f);
  for (const Poly* c : {&T.c_xy, &T.c_yz, &T.c_xz})
    if (!c->is_zero() && !exact_divide(*c, f)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// bounded-degree algebraic solutions

/// One branch of the monic-leading-monomial search.  `solution` lives in
/// the ring (x, y, z, remaining parameters); `constraints` is the reduced
/// basis of the condition ideal over the parameters (empty means the whole
/// branch solves), `free_params` the parameters not solved by a leading
/// pure power.
struct SolutionFamily {
  Monomial leading;
  Poly solution;
  std::vector<Poly> constraints;
  std::vector<std::string> free_params;
};

namespace detail {

/// All monomials of total degree n in three variables, descending grevlex.
inline std::vector<Monomial> homogeneous_monomials3(int n) {
  std::vector<Monomial> out;
  for (Exp a = Exp(n); a >= 0; --a)
    for (Exp b = Exp(n) - a; b >= 0; --b) {
      Monomial m(3);
      m.e[0] = a;
      m.e[1] = b;
      m.e[2] = Exp(n) - a - b;
      out.push_back(std::move(m));
    }
  std::sort(out.begin(), out.end(), [](const Monomial& p, const Monomial& q) {
    return grevlex_less(q, p);
  });
  return out;
}

/// grevlex on the first three (x, y, z) slots of a combined monomial.
inline bool xyz_less(const Monomial& a, const Monomial& b) {
  std::int64_t da = a.e[0] + a.e[1] + a.e[2], db = b.e[0] + b.e[1] + b.e[2];
  if (da != db) return da < db;
  for (std::size_t i = 3; i-- > 0;)
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  return false;
}

/// Remainder of g under division by f = mu + lower(xyz) with unknown-linear
/// tail, where divisibility is tested on the xyz part only.  f is monic at
/// mu, so the division is defined over the parameter ring.
inline Poly graph_remainder(Poly g, const Poly& f, const Monomial& mu_xyz) {
  auto xyz_divisible = [&](const Monomial& m) {
    return m.e[0] >= mu_xyz.e[0] && m.e[1] >= mu_xyz.e[1] && m.e[2] >= mu_xyz.e[2];
  };
  for (;;) {
    const Poly::Term* pick = nullptr;
    for (const auto& t : g.terms)
      if (xyz_divisible(t.first))
        if (!pick || xyz_less(pick->first, t.first)) pick = &t;
    if (!pick) return g;
    Monomial q = pick->first;
    q.e[0] -= mu_xyz.e[0];
    q.e[1] -= mu_xyz.e[1];
    q.e[2] -= mu_xyz.e[2];
    g = g - term_mul(q, pick->second, f);
  }
}

}  // namespace detail

/// Searches, degree by leading monomial, for homogeneous f of degree n with
/// f | omega ^ df.  Each branch fixes a monic leading monomial, eliminates
/// the cofactor by exact division and solves the remainder system over the
/// unknown coefficients by Groebner-basis consistency.  Families are
/// projectively distinct by construction.
inline std::vector<SolutionFamily> algebraic_solution_search(const PfaffForm& w, int n,
                                                             const GbOptions& opts = {}) {
  if (n < 1) throw precondition_error("algebraic_solution_search: degree must be >= 1");
  const VarSpecPtr xyz = w.w1.spec;
  std::vector<Monomial> monos = detail::homogeneous_monomials3(n);
  std::vector<SolutionFamily> families;

  for (std::size_t lead = 0; lead < monos.size(); ++lead) {
    std::size_t k = monos.size() - lead - 1;  // unknowns below the leading monomial
    std::vector<std::string> cnames;
    for (std::size_t i = 0; i < k; ++i) cnames.push_back("c" + std::to_string(i + 1));
    std::vector<std::string> names = {"x", "y", "z"};
    names.insert(names.end(), cnames.begin(), cnames.end());
    VarSpecPtr ring = make_varspec(names);

    // f = mu + sum c_i nu_i
    std::vector<Poly::Term> fterms;
    Monomial mu(ring->size());
    for (int i = 0; i < 3; ++i) mu.e[std::size_t(i)] = monos[lead].e[std::size_t(i)];
    fterms.emplace_back(mu, Rat(1));
    for (std::size_t i = 0; i < k; ++i) {
      Monomial m(ring->size());
      for (int j = 0; j < 3; ++j) m.e[std::size_t(j)] = monos[lead + 1 + i].e[std::size_t(j)];
      m.e[3 + i] = 1;
      fterms.emplace_back(std::move(m), Rat(1));
    }
    Poly f = Poly::from_terms(ring, std::move(fterms));

    TwoForm T = omega_wedge_df(re_spec(w.w1, ring), re_spec(w.w2, ring), re_spec(w.w3, ring), f);
    Monomial mu3(3);
    for (int i = 0; i < 3; ++i) mu3.e[std::size_t(i)] = monos[lead].e[std::size_t(i)];

    // collect the remainder equations over the parameter ring
    bool inconsistent_constants = false;
    std::vector<Poly> equations;
    VarSpecPtr cring = make_varspec(cnames);
    for (const Poly* comp : {&T.c_xy, &T.c_yz, &T.c_xz}) {
      Poly r = detail::graph_remainder(*comp, f, mu3);
      std::map<Monomial, std::vector<Poly::Term>, decltype(&grevlex_less)> by_xyz(&grevlex_less);
      for (const auto& t : r.terms) {
        Monomial sigma(3);
        for (int i = 0; i < 3; ++i) sigma.e[std::size_t(i)] = t.first.e[std::size_t(i)];
        Monomial cpart(cnames.size());
        for (std::size_t i = 0; i < cnames.size(); ++i) cpart.e[i] = t.first.e[3 + i];
        by_xyz[sigma].emplace_back(std::move(cpart), t.second);
      }
      for (auto& [sigma, terms] : by_xyz) {
        if (cnames.empty()) {
          inconsistent_constants = true;  // nonzero constant equation
          break;
        }
        equations.push_back(Poly::from_terms(cring, terms));
      }
      if (inconsistent_constants) break;
    }
    if (inconsistent_constants) continue;

    SolutionFamily fam;
    fam.leading = monos[lead];
    if (equations.empty()) {
      fam.solution = f;
      fam.free_params = cnames;
      families.push_back(std::move(fam));
      continue;
    }
    GroebnerBasis G = buchberger(make_ideal(cring, equations), default_order(cring), opts);
    if (G.is_unit()) continue;
    fam.constraints = G.basis;
    for (std::size_t v = 0; v < cnames.size(); ++v) {
      bool bound = false;
      for (const auto& b : G.basis) {
        const Monomial& lm = b.terms.front().first;
        bool pure = lm.e[v] > 0;
        for (std::size_t u = 0; u < cnames.size() && pure; ++u)
          if (u != v && lm.e[u] != 0) pure = false;
        if (pure) bound = true;
      }
      if (!bound) fam.free_params.push_back(cnames[v]);
    }
    // substitute normal forms of the parameters into f
    Poly sol = Poly::zero(ring);
    {
      std::vector<Poly::Term> terms;
      terms.emplace_back(mu, Rat(1));
      sol = Poly::from_terms(ring, terms);
      for (std::size_t i = 0; i < k; ++i) {
        Poly ci = PolyT<Rat>::variable(cring, i);
        Poly nf = normal_form(ci, G);
        Monomial nu(ring->size());
        for (int j = 0; j < 3; ++j) nu.e[std::size_t(j)] = monos[lead + 1 + i].e[std::size_t(j)];
        sol = sol + term_mul(nu, Rat(1), re_spec(nf, ring));
      }
    }
    fam.solution = std::move(sol);
    families.push_back(std::move(fam));
  }
  return families;
}

// ---------------------------------------------------------------------------
// smooth separatrix jets

template <class K>
struct SeparatrixJetT {
  std::array<K, 3> base;
  int axis = 2;       // solved coordinate: 0 = x, 1 = y, 2 = z
  PolyT<K> phi;       // centered graph series in the two free coordinates
  int order = 0;      // terms up to total degree `order`
};

using SeparatrixJet = SeparatrixJetT<Rat>;

namespace detail {

template <class K>
PolyT<K> subst_axis_truncated(const PolyT<K>& p, std::size_t axis, const PolyT<K>& phi,
                              std::int64_t bound) {
  Exp maxe = degree_in(p, axis);
  std::vector<PolyT<K>> powers;
  powers.push_back(PolyT<K>::constant(p.spec, K(1)));
  for (Exp e = 1; e <= maxe; ++e)
    powers.push_back(truncate_total_degree(powers.back() * phi, bound));
  PolyT<K> acc = PolyT<K>::zero(p.spec);
  for (const auto& t : p.terms) {
    Monomial m = t.first;
    Exp e = m.e[axis];
    m.e[axis] = 0;
    acc = acc + term_mul(m, t.second, powers[std::size_t(e)]);
  }
  return truncate_total_degree(acc, bound);
}

/// Order-by-order integration of the graph equation on the chosen axis.
/// Components and point are already arranged so `axis` is solved; the
/// returned phi is a polynomial in the two free variables (axis exponent 0)
/// with phi(0) = 0 and degree <= N.
template <class K>
PolyT<K> solve_graph(const std::array<PolyT<K>, 3>& w, const std::array<K, 3>& point,
                     std::size_t axis, int N) {
  const VarSpecPtr& spec = w[0].spec;
  std::array<PolyT<K>, 3> shifted;
  std::vector<K> shift_vec(point.begin(), point.end());
  for (int i = 0; i < 3; ++i) shifted[std::size_t(i)] = shift_point(w[std::size_t(i)], shift_vec);

  std::array<std::size_t, 2> free{};
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (i != axis) free[k++] = i;
  }

  PolyT<K> phi = PolyT<K>::zero(spec);
  for (int k = 0; k < N; ++k) {
    std::int64_t bound = k + 1;
    PolyT<K> s1 = subst_axis_truncated(shifted[free[0]], axis, phi, bound);
    PolyT<K> s2 = subst_axis_truncated(shifted[free[1]], axis, phi, bound);
    PolyT<K> s3 = subst_axis_truncated(shifted[axis], axis, phi, bound);
    PolyT<K> c0 = homogeneous_part(s3, 0);
    if (c0.is_zero()) throw internal_error("graph solver: axis component lost its unit");
    K c0v = c0.terms.front().second;
    // inverse of s3 as a series, degree parts 0..k
    std::vector<PolyT<K>> inv;
    inv.push_back(PolyT<K>::constant(spec, K(1) / c0v));
    for (int d = 1; d <= k; ++d) {
      PolyT<K> acc = PolyT<K>::zero(spec);
      for (int j = 0; j < d; ++j) acc = acc + inv[std::size_t(j)] * homogeneous_part(s3, d - j);
      inv.push_back(scalar_mul(K(0) - K(1) / c0v, homogeneous_part(acc, d)));
    }
    auto quot_part = [&](const PolyT<K>& s) {
      PolyT<K> acc = PolyT<K>::zero(spec);
      for (int j = 0; j <= k; ++j)
        acc = acc + homogeneous_part(s, j) * inv[std::size_t(k - j)];
      return scalar_mul(K(0) - K(1), homogeneous_part(acc, k));
    };
    PolyT<K> Ak = quot_part(s1);
    PolyT<K> Bk = quot_part(s2);
    PolyT<K> next = scalar_mul(K(1) / K(k + 1),
                               PolyT<K>::variable(spec, free[0]) * Ak +
                                   PolyT<K>::variable(spec, free[1]) * Bk);
    if (!(derivative(next, free[0]) == Ak) || !(derivative(next, free[1]) == Bk))
      throw internal_error("graph solver: cross-derivative consistency failed at order " +
                           std::to_string(k));
    phi = phi + next;
  }
  return phi;
}

/// Residual of the one-form on the graph, truncated below total degree N;
/// both components vanish exactly for a correct jet.
template <class K>
std::pair<PolyT<K>, PolyT<K>> graph_residual(const std::array<PolyT<K>, 3>& w,
                                             const std::array<K, 3>& point, std::size_t axis,
                                             const PolyT<K>& phi, int N) {
  std::array<PolyT<K>, 3> shifted;
  std::vector<K> shift_vec(point.begin(), point.end());
  for (int i = 0; i < 3; ++i) shifted[std::size_t(i)] = shift_point(w[std::size_t(i)], shift_vec);
  std::array<std::size_t, 2> free{};
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (i != axis) free[k++] = i;
  }
  PolyT<K> s1 = subst_axis_truncated(shifted[free[0]], axis, phi, N);
  PolyT<K> s2 = subst_axis_truncated(shifted[free[1]], axis, phi, N);
  PolyT<K> s3 = subst_axis_truncated(shifted[axis], axis, phi, N);
  PolyT<K> r1 = truncate_total_degree(s1 + s3 * derivative(phi, free[0]), N);
  PolyT<K> r2 = truncate_total_degree(s2 + s3 * derivative(phi, free[1]), N);
  return {std::move(r1), std::move(r2)};
}

}  // namespace detail

/// The unique smooth formal separatrix jet through a nonsingular point of
/// an integrable one-form; the graph axis is the component nonvanishing at
/// p, ties broken z > y > x.
inline SeparatrixJet smooth_separatrix(const Poly& w1, const Poly& w2, const Poly& w3,
                                       const std::array<Rat, 3>& p, int N) {
  const VarSpecPtr& spec = w1.spec;
  if (spec->size() != 3) throw precondition_error("smooth_separatrix: ring must be x, y, z");
  IntegrabilityResult integ = check_integrability(w1, w2, w3);
  if (!integ.integrable)
    throw precondition_error("smooth_separatrix: form is not integrable, residual " +
                             to_string(integ.residual));
  std::vector<Rat> pv(p.begin(), p.end());
  std::array<Rat, 3> vals{eval_at(w1, pv), eval_at(w2, pv), eval_at(w3, pv)};
  int axis = -1;
  for (int i = 2; i >= 0; --i)
    if (vals[std::size_t(i)] != 0) {
      axis = i;
      break;
    }
  if (axis < 0)
    throw precondition_error("smooth_separatrix: singular point of the foliation");
  std::array<Poly, 3> w{w1, w2, w3};
  SeparatrixJet jet;
  jet.base = p;
  jet.axis = axis;
  jet.order = N;
  jet.phi = detail::solve_graph<Rat>(w, p, std::size_t(axis), N);
  return jet;
}

inline SeparatrixJet smooth_separatrix(const PfaffForm& w, const std::array<Rat, 3>& p, int N) {
  return smooth_separatrix(w.w1, w.w2, w.w3, p, N);
}

/// Residual re-check used by tests: both graph components below degree N.
template <class K>
std::pair<PolyT<K>, PolyT<K>> separatrix_residual(const PolyT<K>& w1, const PolyT<K>& w2,
                                                  const PolyT<K>& w3,
                                                  const SeparatrixJetT<K>& jet) {
  std::array<PolyT<K>, 3> w{w1, w2, w3};
  return detail::graph_residual<K>(w, jet.base, std::size_t(jet.axis), jet.phi, jet.order);
}

// ---------------------------------------------------------------------------
// lines through the origin and separatrix families

struct LineValidation {
  bool pass = false;
  std::array<std::optional<int>, 3> restriction_order;  // s-order of w_i on s*v
  int expected_order = 0;
  std::string witness;
};

/// The restrictions of the components to the line s -> s*v must not all
/// vanish and their gcd-order in s must equal m, so omega(p(s)) != 0 for
/// s != 0.
inline LineValidation line_validation(const PfaffForm& w, const std::array<Rat, 3>& direction) {
  if (direction[0] == 0 && direction[1] == 0 && direction[2] == 0)
    throw precondition_error("line_validation: direction must be nonzero");
  LineValidation out;
  out.expected_order = w.m;
  std::array<const Poly*, 3> comps{&w.w1, &w.w2, &w.w3};
  std::optional<int> min_order;
  for (int i = 0; i < 3; ++i) {
    // restriction: sum over terms of coeff * prod v_k^{e_k} * s^{deg}
    std::map<std::int64_t, Rat> univ;
    for (const auto& t : comps[std::size_t(i)]->terms) {
      Rat c = t.second;
      bool zero = false;
      for (int k = 0; k < 3; ++k) {
        for (Exp e = 0; e < t.first.e[std::size_t(k)]; ++e) c *= direction[std::size_t(k)];
        if (direction[std::size_t(k)] == 0 && t.first.e[std::size_t(k)] > 0) zero = true;
      }
      if (!zero && c != 0) univ[mono_degree(t.first)] += c;
    }
    std::optional<int> ord;
    for (auto& [deg, coeff] : univ)
      if (coeff != 0) {
        ord = int(deg);
        break;
      }
    out.restriction_order[std::size_t(i)] = ord;
    if (ord && (!min_order || *ord < *min_order)) min_order = ord;
    if (ord && out.witness.empty()) {
      Rat lead = univ[*ord];
      out.witness = "component " + std::to_string(i + 1) + " restricts to " + rat_str(lead) +
                    "*s^" + std::to_string(*ord);
    }
  }
  out.pass = min_order.has_value() && *min_order == w.m;
  if (!min_order) out.witness = "all components restrict to 0 on the line";
  return out;
}

/// Separatrix family along the punctured line w*direction: the pointwise
/// solver run with coefficients in Q(w).  pole_profile[k] is the maximal
/// multiplicity of w = 0 among denominators of the total-degree-k
/// coefficients of phi.
struct FamilyJet {
  std::array<Rat, 3> direction;
  int axis = 2;
  PolyT<RatFunc> phi;
  int order = 0;
  std::vector<int> pole_profile;  // indices 0..order
};

inline PolyT<RatFunc> lift_to_family(const Poly& p, const VarSpecPtr& spec) {
  PolyT<RatFunc> out(spec);
  for (const auto& t : p.terms) out.terms.emplace_back(t.first, RatFunc(t.second));
  return out;
}

inline FamilyJet separatrix_family(const PfaffForm& w, const std::array<Rat, 3>& direction,
                                   int N) {
  LineValidation lv = line_validation(w, direction);
  if (!lv.pass)
    throw precondition_error("separatrix_family: line fails validation (" + lv.witness + ")");
  IntegrabilityResult integ = check_integrability(w);
  if (!integ.integrable)
    throw precondition_error("separatrix_family: form is not integrable");
  VarSpecPtr spec = w.w1.spec;
  std::array<PolyT<RatFunc>, 3> lifted{lift_to_family(w.w1, spec), lift_to_family(w.w2, spec),
                                       lift_to_family(w.w3, spec)};
  std::array<RatFunc, 3> point{RatFunc(upoly_w(direction[0]), UPoly(Rat(1))),
                               RatFunc(upoly_w(direction[1]), UPoly(Rat(1))),
                               RatFunc(upoly_w(direction[2]), UPoly(Rat(1)))};
  std::array<RatFunc, 3> vals{eval_at(lifted[0], {point[0], point[1], point[2]}),
                              eval_at(lifted[1], {point[0], point[1], point[2]}),
                              eval_at(lifted[2], {point[0], point[1], point[2]})};
  int axis = -1;
  for (int i = 2; i >= 0; --i)
    if (!vals[std::size_t(i)].is_zero()) {
      axis = i;
      break;
    }
  if (axis < 0) throw internal_error("separatrix_family: validated line has vanishing form");

  FamilyJet fam;
  fam.direction = direction;
  fam.axis = axis;
  fam.order = N;
  fam.phi = detail::solve_graph<RatFunc>(lifted, point, std::size_t(axis), N);
  fam.pole_profile.assign(std::size_t(N) + 1, 0);
  for (const auto& t : fam.phi.terms) {
    std::int64_t k = mono_degree(t.first);
    if (k >= 0 && k <= N)
      fam.pole_profile[std::size_t(k)] =
          std::max(fam.pole_profile[std::size_t(k)], w_pole_order(t.second));
  }
  return fam;
}

/// Pointwise jet at w = w0 (denominators must not vanish there).
inline SeparatrixJet specialize_family(const FamilyJet& fam, const Rat& w0) {
  SeparatrixJet jet;
  jet.base = {fam.direction[0] * w0, fam.direction[1] * w0, fam.direction[2] * w0};
  jet.axis = fam.axis;
  jet.order = fam.order;
  Poly phi(fam.phi.spec);
  for (const auto& t : fam.phi.terms) {
    Rat v = ratfunc_eval(t.second, w0);
    if (v != 0) phi.terms.emplace_back(t.first, v);
  }
  jet.phi = std::move(phi);
  return jet;
}

}  // namespace formalis

#endif
