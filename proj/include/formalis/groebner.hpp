#ifndef FORMALIS_GROEBNER_HPP
#define FORMALIS_GROEBNER_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "formalis/log.hpp"
#include "formalis/parser.hpp"
#include "formalis/poly.hpp"

namespace formalis {

// ---------------------------------------------------------------------------
// monomial orders

/// Total multiplicative order on exponent vectors.  `sequence` permutes the
/// declared variables; a nonzero `block` makes the first `block` entries of
/// the sequence a leading elimination block (compared first, by `kind`).
struct MonomialOrder {
  enum class Kind { lex, grevlex };

  Kind kind = Kind::grevlex;
  std::vector<std::size_t> sequence;
  std::size_t block = 0;

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind == b.kind && a.sequence == b.sequence && a.block == b.block;
  }
};

namespace detail {

inline int cmp_slice(const Monomial& a, const Monomial& b, MonomialOrder::Kind kind,
                     const std::vector<std::size_t>& seq, std::size_t lo, std::size_t hi) {
  if (kind == MonomialOrder::Kind::lex) {
    for (std::size_t k = lo; k < hi; ++k) {
      std::size_t i = seq[k];
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    }
    return 0;
  }
  std::int64_t da = 0, db = 0;
  for (std::size_t k = lo; k < hi; ++k) {
    da += a.e[seq[k]];
    db += b.e[seq[k]];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t k = hi; k-- > lo;) {
    std::size_t i = seq[k];
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace detail

inline int mono_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
  std::size_t n = ord.sequence.size();
  if (ord.block > 0 && ord.block < n) {
    int c = detail::cmp_slice(a, b, ord.kind, ord.sequence, 0, ord.block);
    if (c != 0) return c;
    return detail::cmp_slice(a, b, ord.kind, ord.sequence, ord.block, n);
  }
  return detail::cmp_slice(a, b, ord.kind, ord.sequence, 0, n);
}

inline bool mono_less(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
  return mono_cmp(a, b, ord) < 0;
}

inline MonomialOrder default_order(const VarSpecPtr& spec,
                                   MonomialOrder::Kind kind = MonomialOrder::Kind::grevlex) {
  MonomialOrder ord;
  ord.kind = kind;
  ord.sequence.resize(spec->size());
  for (std::size_t i = 0; i < spec->size(); ++i) ord.sequence[i] = i;
  return ord;
}

/// Block order with the dropped variables leading; grevlex inside blocks.
inline MonomialOrder elimination_order(const VarSpecPtr& spec,
                                       const std::vector<std::size_t>& drop) {
  MonomialOrder ord;
  ord.kind = MonomialOrder::Kind::grevlex;
  std::vector<bool> dropped(spec->size(), false);
  for (auto i : drop) dropped[i] = true;
  for (auto i : drop) ord.sequence.push_back(i);
  for (std::size_t i = 0; i < spec->size(); ++i)
    if (!dropped[i]) ord.sequence.push_back(i);
  ord.block = drop.size();
  return ord;
}

inline std::string order_str(const VarSpec& spec, const MonomialOrder& ord) {
  std::string s = ord.kind == MonomialOrder::Kind::lex ? "lex:" : "grevlex:";
  for (std::size_t k = 0; k < ord.sequence.size(); ++k) {
    if (k) s += ",";
    s += spec.name(ord.sequence[k]);
  }
  s += ";block=" + std::to_string(ord.block);
  return s;
}

// ---------------------------------------------------------------------------
// ideals

/// Finite generating set over a polynomial model ring (no invertible
/// variables).  Zero generators are removed on construction.
struct Ideal {
  VarSpecPtr spec;
  std::vector<Poly> gens;
};

inline Ideal make_ideal(VarSpecPtr spec, std::vector<Poly> gens) {
  if (spec->any_invertible())
    throw precondition_error(
        "ideals live in polynomial model rings; clear Laurent denominators first");
  Ideal I;
  I.spec = std::move(spec);
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    require_same_spec(g.spec, I.spec, "ideal generator");
    I.gens.push_back(std::move(g));
  }
  return I;
}

inline Ideal zero_ideal(VarSpecPtr spec) { return make_ideal(std::move(spec), {}); }

inline Ideal ideal_add(const Ideal& a, const Ideal& b) {
  require_same_spec(a.spec, b.spec, "ideal sum");
  std::vector<Poly> gens = a.gens;
  gens.insert(gens.end(), b.gens.begin(), b.gens.end());
  return make_ideal(a.spec, std::move(gens));
}

/// Generated by all n-fold products of generators.
inline Ideal ideal_pow(const Ideal& I, unsigned n) {
  if (n == 0) return make_ideal(I.spec, {Poly::constant(I.spec, Rat(1))});
  std::vector<Poly> cur = I.gens;
  for (unsigned k = 1; k < n; ++k) {
    std::vector<Poly> next;
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = 0; j < I.gens.size(); ++j) next.push_back(cur[i] * I.gens[j]);
    cur = std::move(next);
  }
  return make_ideal(I.spec, std::move(cur));
}

// ---------------------------------------------------------------------------
// normalization helpers

/// Scales to integer coefficients with content 1 and positive leading
/// (storage-order) coefficient.  Exact; used to tame coefficient growth.
inline Poly make_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  BigInt den_lcm = 1;
  for (const auto& t : p.terms)
    den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(t.second));
  BigInt num_gcd = 0;
  for (const auto& t : p.terms) {
    Rat scaled = t.second * Rat(den_lcm);
    num_gcd = boost::multiprecision::gcd(num_gcd, numerator(scaled));
  }
  if (num_gcd == 0) return p;
  Rat factor(den_lcm, num_gcd);
  if (p.terms.front().second < 0) factor = -factor;
  return scalar_mul(factor, p);
}

inline Poly monic(const Poly& p, const MonomialOrder& ord);

// ---------------------------------------------------------------------------
// the engine

struct GbOptions {
  std::int64_t max_degree = 40;
  std::int64_t max_pairs = 200000;
  class GbCache* cache = nullptr;
};

struct GroebnerBasis {
  MonomialOrder order;
  std::vector<Poly> basis;  // reduced: monic, mutually irreducible, sorted

  bool is_unit() const {
    return basis.size() == 1 && basis[0].terms.size() == 1 && basis[0].terms[0].first.is_one();
  }
};

namespace detail {

/// Terms sorted strictly descending under the working order.
struct OPoly {
  std::vector<Poly::Term> t;
  bool is_zero() const { return t.empty(); }
};

inline OPoly opoly_from(const Poly& p, const MonomialOrder& ord) {
  OPoly r;
  r.t = p.terms;
  std::sort(r.t.begin(), r.t.end(), [&](const Poly::Term& a, const Poly::Term& b) {
    return mono_cmp(a.first, b.first, ord) > 0;
  });
  return r;
}

inline Poly opoly_to_poly(const OPoly& o, const VarSpecPtr& spec) {
  return Poly::from_terms(spec, o.t);
}

/// a - c * x^m * b, both sorted; result sorted.
inline OPoly opoly_sub_mul(const OPoly& a, const Rat& c, const Monomial& m, const OPoly& b,
                           const MonomialOrder& ord) {
  OPoly r;
  r.t.reserve(a.t.size() + b.t.size());
  std::size_t i = 0, j = 0;
  while (i < a.t.size() && j < b.t.size()) {
    Monomial bm = mono_mul(m, b.t[j].first);
    int cmp = mono_cmp(a.t[i].first, bm, ord);
    if (cmp > 0) {
      r.t.push_back(a.t[i++]);
    } else if (cmp < 0) {
      r.t.emplace_back(std::move(bm), -(c * b.t[j].second));
      ++j;
    } else {
      Rat v = a.t[i].second - c * b.t[j].second;
      if (v != 0) r.t.emplace_back(a.t[i].first, std::move(v));
      ++i, ++j;
    }
  }
  for (; i < a.t.size(); ++i) r.t.push_back(a.t[i]);
  for (; j < b.t.size(); ++j)
    r.t.emplace_back(mono_mul(m, b.t[j].first), -(c * b.t[j].second));
  return r;
}

struct DivisionResult {
  OPoly remainder;
  std::vector<OPoly> quotients;  // aligned with divisor list
};

/// Full multivariate division: no remainder term is divisible by any
/// divisor leading monomial, and input = sum(quotients[i] * divisor[i]) +
/// remainder exactly.  Deterministic: first matching divisor wins.
inline DivisionResult opoly_divide(OPoly f, const std::vector<OPoly>& divisors,
                                   const MonomialOrder& ord) {
  DivisionResult res;
  res.quotients.resize(divisors.size());
  std::vector<Poly::Term> rem;
  while (!f.t.empty()) {
    const auto& lead = f.t.front();
    bool reduced = false;
    for (std::size_t k = 0; k < divisors.size(); ++k) {
      if (divisors[k].is_zero()) continue;
      const auto& dl = divisors[k].t.front();
      if (!mono_divides(dl.first, lead.first)) continue;
      Monomial m = mono_div(lead.first, dl.first);
      Rat c = lead.second / dl.second;
      res.quotients[k].t.emplace_back(m, c);
      f = opoly_sub_mul(f, c, m, divisors[k], ord);
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.push_back(f.t.front());
      f.t.erase(f.t.begin());
    }
  }
  res.remainder.t = std::move(rem);
  return res;
}

inline OPoly opoly_reduce(OPoly f, const std::vector<OPoly>& divisors, const MonomialOrder& ord) {
  return opoly_divide(std::move(f), divisors, ord).remainder;
}

inline OPoly s_poly(const OPoly& f, const OPoly& g, const MonomialOrder& ord) {
  const Monomial lcm = mono_lcm(f.t.front().first, g.t.front().first);
  Monomial mf = mono_div(lcm, f.t.front().first);
  Monomial mg = mono_div(lcm, g.t.front().first);
  OPoly lhs;
  lhs.t.reserve(f.t.size());
  Rat inv_f = Rat(1) / f.t.front().second;
  for (const auto& t : f.t) lhs.t.emplace_back(mono_mul(mf, t.first), t.second * inv_f);
  Rat inv_g = Rat(1) / g.t.front().second;
  return opoly_sub_mul(lhs, inv_g, mg, g, ord);
}

inline bool is_constant(const OPoly& p) {
  return p.t.size() == 1 && p.t.front().first.is_one();
}

}  // namespace detail

inline Poly monic(const Poly& p, const MonomialOrder& ord) {
  if (p.is_zero()) return p;
  const Poly::Term* lead = &p.terms.front();
  for (const auto& t : p.terms)
    if (mono_cmp(t.first, lead->first, ord) > 0) lead = &t;
  return scalar_mul(Rat(1) / lead->second, p);
}

class GbCache;
namespace detail {
inline bool cache_lookup(GbCache& cache, const std::string& key_line, const VarSpecPtr& spec,
                         std::vector<Poly>& out);
inline void cache_store(GbCache& cache, const std::string& key_line,
                        const std::vector<Poly>& basis);
inline std::string cache_request_line(const VarSpecPtr& spec, const MonomialOrder& ord,
                                      const std::vector<Poly>& gens);
}  // namespace detail

/// Buchberger with the coprime-lcm and chain pair criteria, full
/// inter-reduction at the end.  The result is the reduced basis, unique
/// for (ideal, order); exceeding the degree or pair budget raises
/// resource_cap_error.
inline GroebnerBasis buchberger(const Ideal& I, const MonomialOrder& ord,
                                const GbOptions& opts = {}) {
  using detail::OPoly;
  GroebnerBasis out;
  out.order = ord;

  std::string cache_key;
  if (opts.cache) {
    cache_key = detail::cache_request_line(I.spec, ord, I.gens);
    std::vector<Poly> cached;
    if (detail::cache_lookup(*opts.cache, cache_key, I.spec, cached)) {
      out.basis = std::move(cached);
      return out;
    }
  }

  std::vector<OPoly> basis;
  for (const auto& g : I.gens) {
    Poly p = make_primitive(g);
    if (p.is_zero()) continue;
    basis.push_back(detail::opoly_from(p, ord));
  }

  auto finalize = [&](std::vector<OPoly> b) {
    // minimalize: drop elements whose lead is divisible by another lead
    std::vector<bool> keep(b.size(), true);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!keep[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (i == j || !keep[j]) continue;
        if (mono_divides(b[j].t.front().first, b[i].t.front().first)) {
          if (b[j].t.front().first == b[i].t.front().first && j > i) continue;
          keep[i] = false;
          break;
        }
      }
    }
    std::vector<OPoly> min;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (keep[i]) min.push_back(std::move(b[i]));
    // inter-reduce to the unique reduced basis
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < min.size(); ++i) {
        std::vector<OPoly> others;
        for (std::size_t j = 0; j < min.size(); ++j)
          if (j != i) others.push_back(min[j]);
        OPoly r = detail::opoly_reduce(min[i], others, ord);
        if (!(r.t == min[i].t)) changed = true;
        if (r.is_zero()) {
          min.erase(min.begin() + static_cast<std::ptrdiff_t>(i));
          --i;
          continue;
        }
        min[i] = std::move(r);
      }
    }
    std::sort(min.begin(), min.end(), [&](const OPoly& a, const OPoly& b2) {
      return mono_cmp(a.t.front().first, b2.t.front().first, ord) > 0;
    });
    out.basis.clear();
    for (auto& p : min) out.basis.push_back(monic(detail::opoly_to_poly(p, I.spec), ord));
    if (opts.cache) detail::cache_store(*opts.cache, cache_key, out.basis);
    return out;
  };

  for (const auto& b : basis)
    if (detail::is_constant(b)) return finalize({b});
  if (basis.empty()) return finalize({});

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };
  auto pair_less = [&](const Pair& a, const Pair& b) {
    int c = mono_cmp(a.lcm, b.lcm, ord);
    if (c != 0) return c < 0;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  };
  std::vector<Pair> pending;
  std::set<std::pair<std::size_t, std::size_t>> pending_idx;
  auto push_pair = [&](std::size_t i, std::size_t j) {
    Pair p{i, j, mono_lcm(basis[i].t.front().first, basis[j].t.front().first)};
    pending.push_back(std::move(p));
    std::push_heap(pending.begin(), pending.end(),
                   [&](const Pair& a, const Pair& b) { return pair_less(b, a); });
    pending_idx.insert({i, j});
  };
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) push_pair(i, j);

  std::int64_t processed = 0;
  while (!pending.empty()) {
    std::pop_heap(pending.begin(), pending.end(),
                  [&](const Pair& a, const Pair& b) { return pair_less(b, a); });
    Pair pr = std::move(pending.back());
    pending.pop_back();
    pending_idx.erase({pr.i, pr.j});

    if (++processed > opts.max_pairs)
      throw resource_cap_error("S-pair budget exceeded (" + std::to_string(opts.max_pairs) + ")");

    const Monomial& lf = basis[pr.i].t.front().first;
    const Monomial& lg = basis[pr.j].t.front().first;
    // coprime criterion
    if (mono_mul(lf, lg) == pr.lcm) continue;
    // chain criterion
    bool skip = false;
    for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (!mono_divides(basis[k].t.front().first, pr.lcm)) continue;
      auto key_ik = std::minmax(pr.i, k);
      auto key_jk = std::minmax(pr.j, k);
      if (!pending_idx.count({key_ik.first, key_ik.second}) &&
          !pending_idx.count({key_jk.first, key_jk.second}))
        skip = true;
    }
    if (skip) continue;

    OPoly s = detail::s_poly(basis[pr.i], basis[pr.j], ord);
    OPoly r = detail::opoly_reduce(std::move(s), basis, ord);
    if (r.is_zero()) continue;
    Poly rp = make_primitive(detail::opoly_to_poly(r, I.spec));
    if (total_degree(rp) > opts.max_degree)
      throw resource_cap_error("degree cap exceeded (" + std::to_string(opts.max_degree) + ")");
    if (rp.terms.size() == 1 && rp.terms.front().first.is_one())
      return finalize({detail::opoly_from(rp, ord)});
    basis.push_back(detail::opoly_from(rp, ord));
    std::size_t newest = basis.size() - 1;
    for (std::size_t i = 0; i < newest; ++i) push_pair(i, newest);
  }
  return finalize(std::move(basis));
}

/// Remainder and cofactors of p against the basis: p = sum q_k b_k + r.
struct NormalFormCertificate {
  Poly remainder;
  std::vector<Poly> cofactors;
};

inline NormalFormCertificate divide_with_certificate(const Poly& p, const GroebnerBasis& G) {
  if (!G.basis.empty()) require_same_spec(p.spec, G.basis.front().spec, "normal form");
  std::vector<detail::OPoly> divisors;
  for (const auto& b : G.basis) divisors.push_back(detail::opoly_from(b, G.order));
  auto res = detail::opoly_divide(detail::opoly_from(p, G.order), divisors, G.order);
  NormalFormCertificate cert;
  cert.remainder = detail::opoly_to_poly(res.remainder, p.spec);
  for (auto& q : res.quotients) cert.cofactors.push_back(detail::opoly_to_poly(q, p.spec));
  return cert;
}

inline Poly normal_form(const Poly& p, const GroebnerBasis& G) {
  return divide_with_certificate(p, G).remainder;
}

inline bool member(const Poly& p, const GroebnerBasis& G) { return normal_form(p, G).is_zero(); }

inline bool member(const Poly& p, const Ideal& I, const GbOptions& opts = {}) {
  return member(p, buchberger(I, default_order(I.spec), opts));
}

/// I contains J: every generator of J reduces to zero modulo GB(I).
inline bool contains(const Ideal& I, const Ideal& J, const GbOptions& opts = {}) {
  require_same_spec(I.spec, J.spec, "ideal containment");
  GroebnerBasis G = buchberger(I, default_order(I.spec), opts);
  for (const auto& g : J.gens)
    if (!member(g, G)) return false;
  return true;
}

inline bool ideal_equal(const Ideal& I, const Ideal& J, const GbOptions& opts = {}) {
  return contains(I, J, opts) && contains(J, I, opts);
}

/// Canonical generators: the reduced grevlex basis.
inline std::vector<Poly> reduced_basis(const Ideal& I, const GbOptions& opts = {}) {
  return buchberger(I, default_order(I.spec), opts).basis;
}

/// Generators of I intersected with the subring omitting `drop`, via a
/// block order with the dropped variables leading.
inline Ideal eliminate(const Ideal& I, const std::vector<std::string>& drop,
                       const GbOptions& opts = {}) {
  if (drop.empty()) return I;
  std::vector<std::size_t> drop_idx;
  for (const auto& name : drop) {
    auto idx = I.spec->index_of(name);
    if (!idx) throw precondition_error("eliminate: unknown variable " + name);
    drop_idx.push_back(*idx);
  }
  GroebnerBasis G = buchberger(I, elimination_order(I.spec, drop_idx), opts);

  std::vector<std::string> kept_names;
  for (std::size_t i = 0; i < I.spec->size(); ++i)
    if (std::find(drop_idx.begin(), drop_idx.end(), i) == drop_idx.end())
      kept_names.push_back(I.spec->name(i));
  std::optional<std::string> series;
  if (auto si = I.spec->series_index()) {
    if (std::find(drop_idx.begin(), drop_idx.end(), *si) == drop_idx.end())
      series = I.spec->name(*si);
  }
  VarSpecPtr target = make_varspec(kept_names, {}, series);

  std::vector<Poly> kept;
  for (const auto& g : G.basis) {
    bool free_of_dropped = true;
    for (const auto& t : g.terms)
      for (auto di : drop_idx)
        if (t.first.e[di] != 0) free_of_dropped = false;
    if (free_of_dropped) kept.push_back(re_spec(g, target));
  }
  return make_ideal(target, std::move(kept));
}

/// (I : f^inf) by the Rabinowitsch construction: eliminate u from
/// (I, u*f - 1).
inline Ideal saturate(const Ideal& I, const Poly& f, const GbOptions& opts = {}) {
  if (f.is_zero()) throw precondition_error("saturate: f must be nonzero");
  require_same_spec(I.spec, f.spec, "saturation");
  std::string u = fresh_var_name(I.spec, "u");
  VarSpecPtr ext = extend_spec(I.spec, {u}, /*extra_first=*/false);
  std::vector<Poly> gens;
  for (const auto& g : I.gens) gens.push_back(re_spec(g, ext));
  Poly uf = PolyT<Rat>::variable(ext, *ext->index_of(u)) * re_spec(f, ext) -
            Poly::constant(ext, Rat(1));
  gens.push_back(std::move(uf));
  Ideal res = eliminate(make_ideal(ext, std::move(gens)), {u}, opts);
  // the kept ring equals the original by construction
  Ideal back;
  back.spec = I.spec;
  for (const auto& g : res.gens) back.gens.push_back(re_spec(g, I.spec));
  return back;
}

/// Rabinowitsch criterion: f in sqrt(I) iff 1 in (I, u*f - 1).
inline bool radical_member(const Poly& f, const Ideal& I, const GbOptions& opts = {}) {
  require_same_spec(I.spec, f.spec, "radical membership");
  if (f.is_zero()) return true;
  std::string u = fresh_var_name(I.spec, "u");
  VarSpecPtr ext = extend_spec(I.spec, {u}, /*extra_first=*/false);
  std::vector<Poly> gens;
  for (const auto& g : I.gens) gens.push_back(re_spec(g, ext));
  gens.push_back(PolyT<Rat>::variable(ext, *ext->index_of(u)) * re_spec(f, ext) -
                 Poly::constant(ext, Rat(1)));
  GroebnerBasis G = buchberger(make_ideal(ext, std::move(gens)), default_order(ext), opts);
  return G.is_unit();
}

/// I ∩ J via the one-fresh-variable construction: eliminate w from
/// w*I + (1-w)*J.
inline Ideal intersect(const Ideal& I, const Ideal& J, const GbOptions& opts = {}) {
  require_same_spec(I.spec, J.spec, "ideal intersection");
  std::string w = fresh_var_name(I.spec, "w");
  VarSpecPtr ext = extend_spec(I.spec, {w}, /*extra_first=*/false);
  Poly wv = PolyT<Rat>::variable(ext, *ext->index_of(w));
  Poly one_minus_w = Poly::constant(ext, Rat(1)) - wv;
  std::vector<Poly> gens;
  for (const auto& g : I.gens) gens.push_back(wv * re_spec(g, ext));
  for (const auto& g : J.gens) gens.push_back(one_minus_w * re_spec(g, ext));
  Ideal res = eliminate(make_ideal(ext, std::move(gens)), {w}, opts);
  Ideal back;
  back.spec = I.spec;
  for (const auto& g : res.gens) back.gens.push_back(re_spec(g, I.spec));
  return back;
}

// ---------------------------------------------------------------------------
// optional textual cache of reduced bases

/// Stores reduced bases keyed by a content hash of (ring, order, sorted
/// normalized generators).  Entries are textual and versioned; corrupt or
/// mismatching entries are ignored and recomputed.
class GbCache {
 public:
  GbCache() = default;
  explicit GbCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
  }

  static constexpr const char* kVersion = "formalis-gb-cache v1";

  bool lookup(const std::string& request, const VarSpecPtr& spec, std::vector<Poly>& out) {
    if (auto it = mem_.find(request); it != mem_.end()) {
      out = it->second;
      return true;
    }
    if (dir_.empty()) return false;
    std::ifstream in(path_for(request));
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line) || line != kVersion) {
      log_info("cache entry ignored (bad version)");
      return false;
    }
    if (!std::getline(in, line) || line != request) {
      log_info("cache entry ignored (key mismatch)");
      return false;
    }
    std::size_t n = 0;
    if (!(in >> n)) {
      log_info("cache entry ignored (corrupt header)");
      return false;
    }
    std::getline(in, line);
    std::vector<Poly> basis;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(in, line)) {
        log_info("cache entry ignored (truncated)");
        return false;
      }
      try {
        basis.push_back(parse_poly(line, spec));
      } catch (const parse_error&) {
        log_info("cache entry ignored (unparsable line)");
        return false;
      }
    }
    mem_[request] = basis;
    out = std::move(basis);
    return true;
  }

  void store(const std::string& request, const std::vector<Poly>& basis) {
    mem_[request] = basis;
    if (dir_.empty()) return;
    std::filesystem::path final_path = path_for(request);
    std::filesystem::path tmp = final_path;
    tmp += ".tmp";
    {
      std::ofstream outf(tmp);
      if (!outf) return;
      outf << kVersion << "\n" << request << "\n" << basis.size() << "\n";
      for (const auto& b : basis) outf << to_string(b) << "\n";
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

 private:
  std::filesystem::path path_for(const std::string& request) const {
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : request) {
      h ^= c;
      h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return dir_ / (os.str() + ".gbcache");
  }

  std::filesystem::path dir_;
  std::unordered_map<std::string, std::vector<Poly>> mem_;
};

namespace detail {

inline std::string cache_request_line(const VarSpecPtr& spec, const MonomialOrder& ord,
                                      const std::vector<Poly>& gens) {
  std::string s = "ring=";
  for (std::size_t i = 0; i < spec->size(); ++i) {
    if (i) s += ",";
    s += spec->name(i);
  }
  if (auto si = spec->series_index()) s += ";series=" + spec->name(*si);
  s += ";order=" + order_str(*spec, ord) + ";gens=";
  std::vector<std::string> norm;
  for (const auto& g : gens) norm.push_back(to_string(make_primitive(g)));
  std::sort(norm.begin(), norm.end());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (i) s += " | ";
    s += norm[i];
  }
  return s;
}

inline bool cache_lookup(GbCache& cache, const std::string& key_line, const VarSpecPtr& spec,
                         std::vector<Poly>& out) {
  return cache.lookup(key_line, spec, out);
}

inline void cache_store(GbCache& cache, const std::string& key_line,
                        const std::vector<Poly>& basis) {
  cache.store(key_line, basis);
}

}  // namespace detail

}  // namespace formalis

#endif
