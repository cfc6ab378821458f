#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace isospec::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

cplx complex_from(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("complex values must be numbers or [re, im] pairs");
}

void validate(const RunConfig& c) {
  if (!(c.a > 0.0) || !(c.a < std::numbers::pi / 3.0)) throw ConfigError("a must lie in (0, pi/3)");
  if (c.nu != 0 && c.nu != 1) throw ConfigError("nu must be 0 or 1");
  if (c.alphas.empty()) throw ConfigError("alphas must not be empty");
  if (c.grid.segment_nodes < 3 || c.grid.segment_nodes % 2 == 0) {
    throw ConfigError("grid.segment_nodes must be odd and at least 3");
  }
  if (c.grid.steps_per_a < 0 || c.grid.steps_per_a % 4 != 0) {
    throw ConfigError("grid.steps_per_a must be a nonnegative multiple of 4");
  }
  if (c.nystrom_n < 16) throw ConfigError("nystrom_n must be at least 16");
  if (c.potential != "family" && c.potential != "zero") throw ConfigError("potential must be 'family' or 'zero'");
  if (c.eigen_source != "analytic" && c.eigen_source != "nystrom") {
    throw ConfigError("eigen_source must be 'analytic' or 'nystrom'");
  }
  if (!std::isfinite(c.e_shift)) throw ConfigError("e_shift must be finite");
  if (!std::isfinite(c.h_scale) || c.h_scale == 0.0) throw ConfigError("h_scale must be finite and nonzero");
  if (c.spectrum.n_max < 1) throw ConfigError("spectrum.n_max must be positive");
  if (!(c.spectrum.newton_tol > 0.0)) throw ConfigError("spectrum.newton_tol must be positive");
  if (!(c.spectrum.im_window > 0.0)) throw ConfigError("spectrum.im_window must be positive");
}

}  // namespace

RunConfig::RunConfig() : a(std::numbers::pi / 4.0), alphas{0.0, 1.0, -2.0, cplx{2.0, 3.0}} {}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(j,
                 {"a", "nu", "alphas", "grid", "nystrom_n", "potential", "eigen_source", "eigen_index", "e_shift",
                  "h_scale", "spectrum", "seed"},
                 "configuration");
  RunConfig c;
  c.a = get(j, "a", c.a);
  c.nu = get(j, "nu", c.nu);
  if (j.contains("alphas")) {
    if (!j["alphas"].is_array()) throw ConfigError("alphas must be an array");
    c.alphas.clear();
    for (const auto& v : j["alphas"]) c.alphas.push_back(complex_from(v));
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw ConfigError("grid must be an object");
    reject_unknown(g, {"segment_nodes", "steps_per_a"}, "grid");
    c.grid.segment_nodes = get(g, "segment_nodes", c.grid.segment_nodes);
    c.grid.steps_per_a = get(g, "steps_per_a", c.grid.steps_per_a);
  }
  c.nystrom_n = get(j, "nystrom_n", c.nystrom_n);
  c.potential = get(j, "potential", c.potential);
  c.eigen_source = get(j, "eigen_source", c.eigen_source);
  c.eigen_index = get(j, "eigen_index", c.eigen_index);
  c.e_shift = get(j, "e_shift", c.e_shift);
  c.h_scale = get(j, "h_scale", c.h_scale);
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    if (!s.is_object()) throw ConfigError("spectrum must be an object");
    reject_unknown(s, {"n_max", "newton_tol", "im_window"}, "spectrum");
    c.spectrum.n_max = get(s, "n_max", c.spectrum.n_max);
    c.spectrum.newton_tol = get(s, "newton_tol", c.spectrum.newton_tol);
    c.spectrum.im_window = get(s, "im_window", c.spectrum.im_window);
  }
  c.seed = get(j, "seed", c.seed);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed configuration " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json alphas = json::array();
  for (const cplx z : c.alphas) alphas.push_back({z.real(), z.imag()});
  return {
      {"a", c.a},
      {"nu", c.nu},
      {"alphas", alphas},
      {"grid", {{"segment_nodes", c.grid.segment_nodes}, {"steps_per_a", c.grid.steps_per_a}}},
      {"nystrom_n", c.nystrom_n},
      {"potential", c.potential},
      {"eigen_source", c.eigen_source},
      {"eigen_index", c.eigen_index},
      {"e_shift", c.e_shift},
      {"h_scale", c.h_scale},
      {"spectrum",
       {{"n_max", c.spectrum.n_max}, {"newton_tol", c.spectrum.newton_tol}, {"im_window", c.spectrum.im_window}}},
      {"seed", c.seed},
  };
}

}  // namespace isospec::cli
