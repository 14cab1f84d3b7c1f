#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kdv5/calibration.hpp"
#include "kdv5/config.hpp"
#include "kdv5/diagnostics.hpp"

namespace kdv5 {

struct Assertion {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  // Upper bounds pass when value <= limit, lower bounds when value >= limit.
  bool upper = true;

  bool passed() const;
  // Distance to the limit, positive when passing.
  double margin() const;
};

struct ScenarioResult {
  std::string scenario;
  ScenarioConfig config;
  std::vector<SeriesRow> series;
  // Additional CSV files (file stem, rows), e.g. the refined run.
  std::vector<std::pair<std::string, std::vector<SeriesRow>>> extra_series;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<InequalityRecord> checks;

  bool passed() const;
};

// Runs the scenario named by cfg.scenario. Solver failures (BlowUp,
// NoContraction) propagate.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const Calibration& cal);

ScenarioResult run_conservation(const ScenarioConfig& cfg);
ScenarioResult run_persistence(const ScenarioConfig& cfg, const Calibration& cal);
ScenarioResult run_decay_regularity(const ScenarioConfig& cfg);
ScenarioResult run_lipschitz(const ScenarioConfig& cfg);
ScenarioResult run_smoothing_probe(const ScenarioConfig& cfg, const Calibration& cal);

// Solve with the configured scheme.
Trajectory solve(const ScenarioConfig& cfg, const RealField& u0);

struct SweepOutcome {
  std::string scenario;
  int exit_code = 0;
  std::string error;
};

// One worker per scenario in cfg.sweep (all five when empty); each writes
// to cfg.out / <scenario>. Results are in the order of the scenario list.
std::vector<SweepOutcome> run_sweep(const ScenarioConfig& cfg, const Calibration& cal, unsigned threads = 0);

}  // namespace kdv5
