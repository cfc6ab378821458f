#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "isospec/family.hpp"

namespace isospec::cli {

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

struct CheckEntry {
  std::string check_name;
  double max_residual;
  double tolerance;
  bool pass;
  std::string anchor;  // the identity or claim being checked
};

struct Report {
  std::string command;
  std::vector<CheckEntry> checks;
  nlohmann::json details = nlohmann::json::object();

  void add(std::string name, double residual, double tolerance, std::string anchor);
  [[nodiscard]] bool pass() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Eigen-relation inputs M_h e = eta e after the config's tampering knobs.
struct EigenInputs {
  PiecewiseFunction h;
  PiecewiseFunction e;
  double eta;
};

[[nodiscard]] EigenInputs eigen_inputs(const RunConfig& config);

/// One family member per configured alpha (q = 0 for potential "zero").
[[nodiscard]] std::vector<FamilyMember> build_members(const RunConfig& config, const EigenInputs& inputs);

/// Lambda grid for closed-vs-direct cross-validation: 60 real points on
/// [-20, 400] and 10 points with imaginary part +-5.
[[nodiscard]] std::vector<cplx> validation_lambdas();

[[nodiscard]] Report run_verify(const RunConfig& config);
[[nodiscard]] Report run_isospec(const RunConfig& config);

/// Each command writes its outputs under `out` and returns an exit code.
int cmd_verify(const RunConfig& config, const std::filesystem::path& out);
int cmd_family(const RunConfig& config, const std::filesystem::path& out);
int cmd_fredholm(const RunConfig& config, const std::filesystem::path& out);
int cmd_spectrum(const RunConfig& config, const std::filesystem::path& out);
int cmd_isospec(const RunConfig& config, const std::filesystem::path& out);

/// Parses arguments and dispatches; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace isospec::cli
