#ifndef FORMALIS_TOWERIO_HPP
#define FORMALIS_TOWERIO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "formalis/towers.hpp"

namespace formalis {

// Tower description file:
// {
//   "vars": ["x", "y"],
//   "invertible": [],
//   "series_var": null,
//   "chain": [["x*y"], ["x*y^2"], ...]
// }

inline Tower tower_from_json(const nlohmann::json& j, const GbOptions& opts = {}) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("chain"))
    throw parse_error("tower file needs 'vars' and 'chain'", 0);
  std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
  std::vector<std::string> invertible;
  if (j.contains("invertible") && !j.at("invertible").is_null())
    invertible = j.at("invertible").get<std::vector<std::string>>();
  std::optional<std::string> series;
  if (j.contains("series_var") && !j.at("series_var").is_null())
    series = j.at("series_var").get<std::string>();
  VarSpecPtr spec = make_varspec(vars, invertible, series);
  std::vector<Ideal> chain;
  for (const auto& level : j.at("chain")) {
    std::vector<Poly> gens;
    for (const auto& g : level) gens.push_back(parse_poly(g.get<std::string>(), spec));
    chain.push_back(make_ideal(spec, std::move(gens)));
  }
  return tower_from_chain(spec, std::move(chain), opts);
}

inline Tower load_tower(const std::string& path, const GbOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open tower file: " + path, 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("tower file is not valid JSON: ") + e.what(), 0);
  }
  return tower_from_json(j, opts);
}

inline nlohmann::json tower_to_json(const Tower& T) {
  nlohmann::json j;
  j["vars"] = T.spec->names();
  std::vector<std::string> inv;
  for (auto i : T.spec->invertible_indices()) inv.push_back(T.spec->name(i));
  j["invertible"] = inv;
  if (auto si = T.spec->series_index())
    j["series_var"] = T.spec->name(*si);
  else
    j["series_var"] = nullptr;
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& I : T.chain) {
    nlohmann::json level = nlohmann::json::array();
    for (const auto& g : I.gens) level.push_back(to_string(g));
    chain.push_back(level);
  }
  j["chain"] = chain;
  return j;
}

}  // namespace formalis

#endif
