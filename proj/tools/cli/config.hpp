#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "isospec/delay_solver.hpp"

namespace isospec::cli {

/// Invalid or unreadable configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectrumConfig {
  int n_max = 20;
  double newton_tol = 1e-10;
  double im_window = 10.0;
};

/// Run configuration. Complex numbers are [re, im] pairs in JSON.
struct RunConfig {
  double a;
  int nu = 1;
  std::vector<cplx> alphas;
  GridOptions grid;
  std::size_t nystrom_n = 256;
  std::string potential = "family";       // "family" or "zero"
  std::string eigen_source = "analytic";  // "analytic" or "nystrom"
  std::size_t eigen_index = 0;
  double e_shift = 0.0;  // added to e (breaks the zero-mean condition when nonzero)
  double h_scale = 1.0;  // multiplies h (breaks the eigen-relation when != 1)
  SpectrumConfig spectrum;
  std::uint64_t seed = 0;

  RunConfig();
};

/// Parses and validates; unknown keys are rejected.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const RunConfig& c);

}  // namespace isospec::cli
