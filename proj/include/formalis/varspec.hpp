#ifndef FORMALIS_VARSPEC_HPP
#define FORMALIS_VARSPEC_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "formalis/errors.hpp"

namespace formalis {

/// Declares the ambient variable system of a polynomial ring: an ordered
/// list of names, the subset that is invertible (Laurent variables) and an
/// optional distinguished series variable.
class VarSpec {
 public:
  VarSpec(std::vector<std::string> names, std::vector<std::string> invertible,
          std::optional<std::string> series_var) {
    names_ = std::move(names);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty())
        throw precondition_error("variable names must be nonempty");
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          throw precondition_error("duplicate variable name: " + names_[i]);
    }
    invertible_.assign(names_.size(), false);
    for (const auto& v : invertible) {
      auto idx = index_of(v);
      if (!idx) throw precondition_error("invertible variable not declared: " + v);
      invertible_[*idx] = true;
    }
    if (series_var) {
      auto idx = index_of(*series_var);
      if (!idx) throw precondition_error("series variable not declared: " + *series_var);
      if (invertible_[*idx])
        throw precondition_error("series variable cannot be invertible: " + *series_var);
      series_ = *idx;
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  bool invertible(std::size_t i) const { return invertible_[i]; }
  bool any_invertible() const {
    return std::any_of(invertible_.begin(), invertible_.end(), [](bool b) { return b; });
  }
  std::vector<std::size_t> invertible_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < invertible_.size(); ++i)
      if (invertible_[i]) out.push_back(i);
    return out;
  }
  std::optional<std::size_t> series_index() const { return series_; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const VarSpec& a, const VarSpec& b) {
    return a.names_ == b.names_ && a.invertible_ == b.invertible_ && a.series_ == b.series_;
  }
  friend bool operator!=(const VarSpec& a, const VarSpec& b) { return !(a == b); }

 private:
  std::vector<std::string> names_;
  std::vector<bool> invertible_;
  std::optional<std::size_t> series_;
};

using VarSpecPtr = std::shared_ptr<const VarSpec>;

inline VarSpecPtr make_varspec(std::vector<std::string> names,
                               std::vector<std::string> invertible = {},
                               std::optional<std::string> series_var = std::nullopt) {
  return std::make_shared<const VarSpec>(std::move(names), std::move(invertible),
                                         std::move(series_var));
}

inline bool same_spec(const VarSpecPtr& a, const VarSpecPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline void require_same_spec(const VarSpecPtr& a, const VarSpecPtr& b, const char* what) {
  if (!same_spec(a, b))
    throw precondition_error(std::string("variable-spec mismatch in ") + what);
}

/// The polynomial model of a ring: same variables, nothing invertible.
/// Ideal computations always happen here.
inline VarSpecPtr polynomial_spec(const VarSpecPtr& s) {
  std::optional<std::string> series;
  if (s->series_index()) series = s->name(*s->series_index());
  return make_varspec(s->names(), {}, series);
}

/// Extends a spec with fresh auxiliary variables (Rabinowitsch and
/// intersection tricks).  New names must not collide.
inline VarSpecPtr extend_spec(const VarSpecPtr& s, const std::vector<std::string>& extra,
                              bool extra_first = true) {
  std::vector<std::string> names;
  if (extra_first) names = extra;
  for (const auto& n : s->names()) names.push_back(n);
  if (!extra_first) names.insert(names.end(), extra.begin(), extra.end());
  std::vector<std::string> inv;
  for (auto i : s->invertible_indices()) inv.push_back(s->name(i));
  std::optional<std::string> series;
  if (s->series_index()) series = s->name(*s->series_index());
  return make_varspec(std::move(names), std::move(inv), std::move(series));
}

/// A variable name of the form `base`, `base_1`, ... not present in the spec.
inline std::string fresh_var_name(const VarSpecPtr& s, const std::string& base) {
  if (!s->index_of(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!s->index_of(cand)) return cand;
  }
}

}  // namespace formalis

#endif
