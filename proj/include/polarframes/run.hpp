#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polarframes/certify.hpp"
#include "polarframes/report.hpp"

namespace polarframes {

inline const std::vector<std::string> kSuiteNames = {"invariants", "theorem1", "theorem2"};

struct RunConfig {
  std::string surface = "equilateral-torus";
  GridSpec grid;
  /// Overrides of the default tolerances, by name.
  std::map<std::string, double> tolerances;
  DerivativeMode derivative_mode = DerivativeMode::analytic;
  std::string format = "json";
  std::optional<std::string> out;
  bool include_points = false;
  std::vector<std::string> suites = kSuiteNames;
  std::uint64_t seed = 1;
  int random_samples = 10000;
  int structure_samples = 27;
  unsigned threads = 0;
  /// Record wall time; off for byte-identical reports.
  bool timing = true;
};

/// Default tolerance for every recognised name. Finite-difference mode
/// loosens the catalog tolerance to 1e-4.
std::map<std::string, double> default_tolerances(DerivativeMode mode);

/// Builds a config from a JSON object. Unknown keys, suites or tolerance
/// names, grid counts below 2 and non-positive tolerances throw
/// InvalidConfig naming the offending field.
RunConfig parse_config(const nlohmann::json& j);

/// Reads and parses a JSON config file; syntax errors report line and column.
RunConfig load_config(const std::string& path);

/// "name=value" tolerance override.
void set_tolerance(RunConfig& config, const std::string& assignment);

/// "NUxNVxNTHETAxNPHI" grid override.
void set_grid(RunConfig& config, const std::string& spec);

void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

/// Runs the selected suites. Deterministic for a fixed config.
VerificationReport run(const RunConfig& config);

}  // namespace polarframes
