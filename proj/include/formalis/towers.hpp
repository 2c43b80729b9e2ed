#ifndef FORMALIS_TOWERS_HPP
#define FORMALIS_TOWERS_HPP

#include <optional>

#include "formalis/groebner.hpp"

namespace formalis {

/// Finite-depth presentation of an admissible ring: a descending chain of
/// ideals I_1 ⊇ I_2 ⊇ ... ⊇ I_depth in a polynomial model ring.  The chain
/// being descending with nilpotent level kernels is checked at construction.
struct Tower {
  VarSpecPtr spec;
  std::vector<Ideal> chain;

  std::size_t depth() const { return chain.size(); }
  const Ideal& level(std::size_t i) const {  // 1-based
    if (i < 1 || i > chain.size()) throw precondition_error("tower level out of range");
    return chain[i - 1];
  }
};

struct TowerIssue {
  std::size_t level;       // 1-based index i of the offending step
  std::string generator;   // offending generator (text form)
  std::string reason;
};

struct ValidationReport {
  bool pass = true;
  std::vector<TowerIssue> issues;
};

/// Chain must be descending and each level kernel I_i / I_{i+1} must
/// consist of nilpotents: every generator of I_i lies in sqrt(I_{i+1}).
inline ValidationReport validate_tower(const Tower& T, const GbOptions& opts = {}) {
  ValidationReport rep;
  for (std::size_t i = 0; i + 1 < T.chain.size(); ++i) {
    if (!contains(T.chain[i], T.chain[i + 1], opts)) {
      rep.pass = false;
      rep.issues.push_back({i + 1, "", "chain is not descending at this step"});
      continue;
    }
    for (const auto& g : T.chain[i].gens) {
      if (!radical_member(g, T.chain[i + 1], opts)) {
        rep.pass = false;
        rep.issues.push_back({i + 1, to_string(g), "generator is not nilpotent modulo the next level"});
      }
    }
  }
  return rep;
}

/// Raw constructor used by operations that preserve validity structurally.
inline Tower make_tower_unchecked(VarSpecPtr spec, std::vector<Ideal> chain) {
  Tower T;
  T.spec = std::move(spec);
  for (auto& I : chain) {
    require_same_spec(I.spec, T.spec, "tower chain ideal");
    T.chain.push_back(std::move(I));
  }
  if (T.chain.empty()) throw precondition_error("tower needs at least one level");
  return T;
}

/// Validated constructor: descending chain with pairwise radical equality
/// (each generator of I_1 is in sqrt(I_i) and conversely).  Rejection
/// carries the witness generator.
inline Tower tower_from_chain(VarSpecPtr spec, std::vector<Ideal> chain,
                              const GbOptions& opts = {}) {
  Tower T = make_tower_unchecked(std::move(spec), std::move(chain));
  for (std::size_t i = 0; i + 1 < T.chain.size(); ++i)
    if (!contains(T.chain[i], T.chain[i + 1], opts))
      throw precondition_error("tower chain not descending at level " + std::to_string(i + 1));
  for (std::size_t i = 1; i < T.chain.size(); ++i) {
    for (const auto& g : T.chain[0].gens)
      if (!radical_member(g, T.chain[i], opts))
        throw precondition_error("radical mismatch: generator " + to_string(g) +
                                 " of level 1 is not in the radical of level " +
                                 std::to_string(i + 1));
    for (const auto& g : T.chain[i].gens)
      if (!radical_member(g, T.chain[0], opts))
        throw precondition_error("radical mismatch: generator " + to_string(g) + " of level " +
                                 std::to_string(i + 1) +
                                 " is not in the radical of level 1");
  }
  ValidationReport rep = validate_tower(T, opts);
  if (!rep.pass)
    throw precondition_error("tower validation failed: " + rep.issues.front().reason);
  return T;
}

/// Levelwise presentation of the closed subscheme cut out by K: I_i + K.
inline Tower quotient_tower(const Tower& T, const Ideal& K, const GbOptions& opts = {}) {
  (void)opts;
  require_same_spec(T.spec, K.spec, "quotient tower");
  std::vector<Ideal> chain;
  for (const auto& I : T.chain) chain.push_back(ideal_add(I, K));
  return make_tower_unchecked(T.spec, std::move(chain));
}

/// Levelwise localization at f: adjoin u with u*f = 1; chain (I_i, u*f-1)
/// over the extended ring presents (A/I_i)_f.
inline Tower complete_localize(const Tower& T, const Poly& f, const GbOptions& opts = {}) {
  (void)opts;
  if (f.is_zero()) throw precondition_error("complete_localize: f must be nonzero");
  require_same_spec(T.spec, f.spec, "complete localization");
  std::string u = fresh_var_name(T.spec, "u");
  VarSpecPtr ext = extend_spec(T.spec, {u}, /*extra_first=*/false);
  Poly rel = PolyT<Rat>::variable(ext, *ext->index_of(u)) * re_spec(f, ext) -
             Poly::constant(ext, Rat(1));
  std::vector<Ideal> chain;
  for (const auto& I : T.chain) {
    std::vector<Poly> gens;
    for (const auto& g : I.gens) gens.push_back(re_spec(g, ext));
    gens.push_back(rel);
    chain.push_back(make_ideal(ext, std::move(gens)));
  }
  return make_tower_unchecked(ext, std::move(chain));
}

struct DefinitionCheck {
  bool pass = false;
  std::optional<std::size_t> open_witness;  // minimal level i with J ⊇ I_i
  // first (generator, level) failing topological nilpotency, if any
  std::optional<std::pair<std::string, std::size_t>> nilpotency_failure;
};

/// J is an ideal of definition iff it is open (contains some chain level)
/// and every generator is topologically nilpotent (lies in sqrt(I_i) for
/// every level).
inline DefinitionCheck is_ideal_of_definition(const Ideal& J, const Tower& T,
                                              const GbOptions& opts = {}) {
  require_same_spec(J.spec, T.spec, "ideal of definition test");
  DefinitionCheck res;
  for (std::size_t i = 1; i <= T.depth(); ++i) {
    if (contains(J, T.level(i), opts)) {
      res.open_witness = i;
      break;
    }
  }
  for (std::size_t i = 1; i <= T.depth(); ++i) {
    for (const auto& g : J.gens) {
      if (!radical_member(g, T.level(i), opts)) {
        res.nilpotency_failure = {to_string(g), i};
        res.pass = false;
        return res;
      }
    }
  }
  res.pass = res.open_witness.has_value();
  return res;
}

/// Containment search in one direction of the adic cofinality test:
/// for each exponent n the minimal chain level inside candidate^n.
struct AdicDirection {
  // per exponent n = 1..n_max: witness level, or nullopt when no chain
  // ideal up to depth is contained in candidate^n
  std::vector<std::optional<std::size_t>> witness;
  // for failed exponents: one offending generator per probed level of the
  // first failing exponent (diagnostic)
  std::optional<std::size_t> first_failure;
  std::vector<std::string> failure_evidence;
  bool pass() const {
    return std::all_of(witness.begin(), witness.end(),
                       [](const auto& w) { return w.has_value(); });
  }
};

struct AdicReport {
  Ideal candidate;
  std::size_t depth = 0;
  int n_max = 0;
  AdicDirection forward;   // n -> i with I_i ⊆ candidate^n
  AdicDirection backward;  // m -> n with candidate^m ⊇ I_n
  bool pass = false;
};

namespace detail {

inline AdicDirection adic_scan(const Tower& T, const Ideal& candidate, int n_max,
                               const GbOptions& opts) {
  AdicDirection dir;
  for (int n = 1; n <= n_max; ++n) {
    Ideal pow = ideal_pow(candidate, static_cast<unsigned>(n));
    GroebnerBasis G = buchberger(pow, default_order(pow.spec), opts);
    std::optional<std::size_t> found;
    for (std::size_t i = 1; i <= T.depth(); ++i) {
      bool inside = true;
      for (const auto& g : T.level(i).gens)
        if (!member(g, G)) {
          inside = false;
          if (!found && !dir.first_failure)
            dir.failure_evidence.push_back("level " + std::to_string(i) + ": generator " +
                                           to_string(g) + " is not in candidate^" +
                                           std::to_string(n));
          break;
        }
      if (inside) {
        found = i;
        break;
      }
    }
    if (!found && !dir.first_failure) dir.first_failure = static_cast<std::size_t>(n);
    if (found) dir.failure_evidence.clear();
    dir.witness.push_back(found);
  }
  return dir;
}

}  // namespace detail

/// Two-direction cofinality probe of the candidate-adic topology against
/// the chain topology, recorded as containment witnesses I_i ⊆ candidate^n.
/// A failure is evidence up to (depth, n_max), not a proof of non-adicness.
inline AdicReport adic_witness_test(const Tower& T, const Ideal& candidate, int n_max,
                                    const GbOptions& opts = {}) {
  require_same_spec(T.spec, candidate.spec, "adic witness test");
  if (n_max < 1) throw precondition_error("n_max must be positive");
  DefinitionCheck def = is_ideal_of_definition(candidate, T, opts);
  if (!def.pass)
    throw precondition_error("adic_witness_test: candidate is not an ideal of definition");
  AdicReport rep;
  rep.candidate = candidate;
  rep.depth = T.depth();
  rep.n_max = n_max;
  // Both recorded directions ask for chain ideals inside candidate powers
  // (forward keyed by n, backward keyed by m); the scan is shared.
  rep.forward = detail::adic_scan(T, candidate, n_max, opts);
  rep.backward = rep.forward;
  rep.pass = rep.forward.pass() && rep.backward.pass();
  return rep;
}

struct DichotomyResult {
  enum class Case { cofinal, stabilized_intersection, inconclusive };
  Case kind = Case::inconclusive;
  // cofinal: per n = 1..n_max the minimal level i with I_i ⊆ m^n
  std::vector<std::size_t> cofinal_witness;
  // stabilized_intersection: canonical generators and the level where the
  // stable value is reached
  std::vector<Poly> intersection_gens;
  std::size_t stable_from = 0;
  std::size_t depth_reached = 0;
};

/// The Chevalley alternative at finite depth: either the chain is cofinal
/// with the m-adic topology, or a nonzero stable part survives.  The stable
/// part is read off the running intersections projected modulo m^n_max
/// (membership of the reported generators in every chain ideal is
/// re-verified).
inline DichotomyResult chevalley_dichotomy(const Tower& T, const Ideal& m, int n_max,
                                           const GbOptions& opts = {}) {
  require_same_spec(T.spec, m.spec, "chevalley dichotomy");
  if (n_max < 1) throw precondition_error("n_max must be positive");
  // m must be a maximal-ideal model: one generator (variable - rational) per variable
  {
    std::vector<bool> seen(T.spec->size(), false);
    for (const auto& g : m.gens) {
      bool ok = false;
      if (!g.is_zero() && g.terms.size() <= 2) {
        const auto& lead = g.terms.front();
        std::size_t var = 0;
        int nz = 0;
        for (std::size_t i = 0; i < lead.first.e.size(); ++i)
          if (lead.first.e[i] != 0) {
            ++nz;
            var = i;
          }
        if (nz == 1 && lead.first.e[var] == 1 && lead.second == 1) {
          bool tail_const = g.terms.size() == 1 || g.terms.back().first.is_one();
          if (tail_const && !seen[var]) {
            seen[var] = true;
            ok = true;
          }
        }
      }
      if (!ok)
        throw precondition_error(
            "chevalley_dichotomy: m must be generated by variables minus a rational point");
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw precondition_error("chevalley_dichotomy: m misses variable " + T.spec->name(i));
  }

  DichotomyResult res;
  res.depth_reached = T.depth();

  // case 1: cofinal
  bool cofinal = true;
  std::vector<std::size_t> witness;
  for (int n = 1; n <= n_max && cofinal; ++n) {
    Ideal pow = ideal_pow(m, static_cast<unsigned>(n));
    GroebnerBasis G = buchberger(pow, default_order(pow.spec), opts);
    std::optional<std::size_t> found;
    for (std::size_t i = 1; i <= T.depth() && !found; ++i) {
      bool inside = true;
      for (const auto& g : T.level(i).gens)
        if (!member(g, G)) {
          inside = false;
          break;
        }
      if (inside) found = i;
    }
    if (found)
      witness.push_back(*found);
    else
      cofinal = false;
  }
  if (cofinal) {
    res.kind = DichotomyResult::Case::cofinal;
    res.cofinal_witness = std::move(witness);
    return res;
  }

  // case 2a: the literal running intersection I_1 ∩ ... ∩ I_i stabilizes
  {
    std::vector<Ideal> running;
    running.push_back(T.level(1));
    for (std::size_t i = 2; i <= T.depth(); ++i)
      running.push_back(intersect(running.back(), T.level(i), opts));
    std::size_t s = T.depth();
    while (s >= 2 && ideal_equal(running[s - 2], running[s - 1], opts)) --s;
    if (s < T.depth() && !running.back().gens.empty()) {
      res.kind = DichotomyResult::Case::stabilized_intersection;
      res.intersection_gens = reduced_basis(running.back(), opts);
      res.stable_from = s;
      return res;
    }
  }

  // case 2b: strictly descending chains: the stable part is what the
  // projections I_i + m^n_max converge to, minus the m-primary junk
  {
    Ideal mpow = ideal_pow(m, static_cast<unsigned>(n_max));
    GroebnerBasis Gm = buchberger(mpow, default_order(mpow.spec), opts);
    std::vector<std::vector<Poly>> proj;
    for (std::size_t i = 1; i <= T.depth(); ++i)
      proj.push_back(reduced_basis(ideal_add(T.level(i), mpow), opts));
    std::size_t s = T.depth();
    while (s >= 2 && proj[s - 2] == proj[s - 1]) --s;
    if (s < T.depth()) {
      GroebnerBasis Gdeep =
          buchberger(T.level(T.depth()), default_order(T.spec), opts);
      std::vector<Poly> stable;
      for (const auto& g : proj.back())
        if (!member(g, Gm) && member(g, Gdeep)) stable.push_back(g);
      // re-verify membership in every chain ideal
      bool ok = !stable.empty();
      for (std::size_t i = 1; i <= T.depth() && ok; ++i) {
        GroebnerBasis Gi = buchberger(T.level(i), default_order(T.spec), opts);
        for (const auto& g : stable)
          if (!member(g, Gi)) ok = false;
      }
      if (ok) {
        res.kind = DichotomyResult::Case::stabilized_intersection;
        res.intersection_gens = reduced_basis(make_ideal(T.spec, stable), opts);
        res.stable_from = s;
        return res;
      }
    }
  }

  res.kind = DichotomyResult::Case::inconclusive;
  return res;
}

}  // namespace formalis

#endif
