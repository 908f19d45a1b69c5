// Configuration parsing, experiment runs and the built-in verification
// suite behind the command-line tool.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "boussinesq/common.hpp"

namespace boussinesq::cli {

/// Parse or schema error. line() is 0 when no source line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

enum class ExperimentType { kDispersion, kDecay, kStrichartz, kBilinear, kEvolve, kGevreyTrack };

std::string_view to_string(ExperimentType type);
/// Throws ConfigError on an unknown name.
ExperimentType parse_experiment_type(std::string_view name);

/// Absent optional values are monostate (null in JSON).
using ParamValue = std::variant<std::monostate, long long, Real, std::vector<Real>, std::string>;

struct ExperimentConfig {
  int dimension = 1;
  int points = 256;
  Real period = 2 * kPi;
  int beta = -1;
  ExperimentType type = ExperimentType::kDecay;
  std::uint64_t seed = 0;
  std::filesystem::path output = "results";
  /// Every key of the experiment's schema, defaults filled in.
  std::map<std::string, ParamValue> params;

  long long integer(const std::string& key) const;
  Real real(const std::string& key) const;
  std::optional<Real> optional_real(const std::string& key) const;
  const std::vector<Real>& reals(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// INI-style text with sections [grid], [dispersion], [experiment] and
/// [output]. Periods accept a "pi" suffix ("64pi", "2.5pi"); lists are
/// comma separated. Unknown sections and keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ExperimentConfig& config);
/// Inverse of to_json; the result is re-validated.
ExperimentConfig config_from_json(const nlohmann::ordered_json& json);

struct RunOptions {
  std::optional<std::filesystem::path> output;   ///< overrides [output] directory
  bool dry_run = false;
  int threads = 1;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitRuntime = 3 };

struct RunOutcome {
  std::filesystem::path directory;
  int exit_code = kExitOk;
  nlohmann::ordered_json summary;
};

/// Creates <output>/<type>_<YYYYmmdd-HHMMSS>[_k] holding manifest.json, the
/// experiment CSVs and summary.json. Module errors are caught and reported
/// in summary.json with status "error" (exit code 3); a configured band
/// that is missed gives status "check_failed" (exit code 1).
RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Contract and invariant checks at reduced sizes. Prints one table row per
/// check to out. Never throws on a failing check.
std::vector<CheckResult> verify_all(std::ostream& out, std::uint64_t seed = 0);

}  // namespace boussinesq::cli
