#pragma once
// Scenario configuration. Files are sectioned `key = value` text:
//
//   [run]
//   scenario = conservation
//   k = 1
//   T = 1
//   [grid]
//   L = 32pi
//   [data]
//   family = gaussian
//
// Numbers accept a trailing `pi` factor ("32pi", "pi", "0.5pi"). Lines
// starting with '#' or ';' are comments. The full key list is in README.md.
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kdv5/evolution.hpp"
#include "kdv5/families.hpp"

namespace kdv5 {

struct ScenarioConfig {
  std::string scenario = "conservation";
  int k = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  double L = 0.0;        // 0: 32 pi
  std::size_t n = 0;     // 0: 1024 for k = 1, 2048 for k = 2
  double T = 1.0;
  double dt = 0.0;       // 0: T / 2048
  std::size_t nt = 64;   // Picard time grid and linear probes
  std::size_t store_every = 16;
  Scheme scheme = Scheme::Etdrk4;
  bool nonlinear = true;
  bool dealias = true;

  DataSpec data;
  bool center_set = false;  // false: 0 for k = 1, -L/2 for k = 2

  double r = 0.5;
  double alpha = 0.125;
  std::optional<double> N;  // weight truncation; nullopt: 3N = 0.8 L
  double rho = 1.0;
  double tol = 1e-10;
  int max_iter = 60;
  double s_target = 2.0;

  // Assertion thresholds.
  double drift_I1 = 1e-8;
  double drift_I2 = 1e-6;
  double contamination = 1e-10;
  double delta = 0.05;
  double lipschitz_spread = 2.0;
  double bound_slack = 1e-6;

  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  std::size_t family_size = 100;
  std::vector<std::string> sweep;

  // Values after applying k-dependent defaults.
  double half_width() const;
  std::size_t points() const;
  double step() const;
  DataSpec resolved_data() const;
};

// Throws ConfigError (with the offending line) on syntax errors, unknown
// keys, bad values and missing required keys (run.k, data.family).
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text);

// Checks cross-field preconditions; throws ConfigError.
void validate(const ScenarioConfig& cfg);

// "32pi" -> 32*pi etc. Throws std::invalid_argument.
double parse_number(const std::string& text);

}  // namespace kdv5
