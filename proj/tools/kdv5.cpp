// kdv5 run <scenario> --config <path> [--seed S] [--out DIR]
// kdv5 sweep --config <path>
// kdv5 calibrate --config <path>
//
// Exit codes: 0 pass, 2 assertion failed, 3 solver failure, 4 config error.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "kdv5/calibration.hpp"
#include "kdv5/config.hpp"
#include "kdv5/errors.hpp"
#include "kdv5/report.hpp"
#include "kdv5/scenarios.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kAssertionFailed = 2;
constexpr int kSolverFailure = 3;
constexpr int kConfigError = 4;

bool needs_calibration(const std::string& scenario) {
  return scenario == "persistence" || scenario == "smoothing_probe";
}

int run_one(const std::string& scenario, const std::string& config, std::optional<std::uint64_t> seed,
            std::optional<std::string> out, const std::string& calibration) {
  kdv5::ScenarioConfig cfg;
  kdv5::Calibration cal;
  try {
    cfg = kdv5::parse_config(config);
    cfg.scenario = scenario;
    for (char& c : cfg.scenario) {
      if (c == '-') c = '_';
    }
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    kdv5::validate(cfg);
    if (needs_calibration(cfg.scenario)) cal = kdv5::load_calibration(calibration);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const kdv5::ScenarioResult res = kdv5::run_scenario(cfg, cal);
    kdv5::emit(res, cfg.out);
    for (const auto& a : res.assertions) {
      std::printf("%-28s %s  value=%.6g limit=%.6g margin=%.6g\n", a.name.c_str(), a.passed() ? "PASS" : "FAIL",
                  a.value, a.limit, a.margin());
    }
    return res.passed() ? kPass : kAssertionFailed;
  } catch (const kdv5::BlowUp& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    kdv5::write_atomic(cfg.out / "summary.json", kdv5::failure_json(cfg, e.what()));
    return kSolverFailure;
  } catch (const kdv5::NoContraction& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    kdv5::write_atomic(cfg.out / "summary.json", kdv5::failure_json(cfg, e.what()));
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

int sweep(const std::string& config, std::optional<std::string> out, const std::string& calibration,
          unsigned threads) {
  kdv5::ScenarioConfig cfg;
  kdv5::Calibration cal;
  try {
    cfg = kdv5::parse_config(config);
    if (out) cfg.out = *out;
    cal = kdv5::load_calibration(calibration);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  int worst = kPass;
  for (const auto& o : kdv5::run_sweep(cfg, cal, threads)) {
    std::printf("%-18s exit=%d%s%s\n", o.scenario.c_str(), o.exit_code, o.error.empty() ? "" : "  ",
                o.error.c_str());
    worst = std::max(worst, o.exit_code);
  }
  return worst;
}

int calibrate(const std::string& config, const std::string& output) {
  kdv5::ScenarioConfig cfg;
  try {
    cfg = kdv5::parse_config(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const kdv5::Calibration cal = kdv5::calibrate(cfg.half_width(), cfg.points(), cfg.seed, cfg.family_size);
  kdv5::save_calibration(cal, output);
  std::printf("wrote %s\n", output.c_str());
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fifth-order KdV simulator and weighted-norm diagnostics"};
  app.require_subcommand(1);

  std::string config;
  std::string calibration = kdv5::default_calibration_path().string();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  auto* run = app.add_subcommand("run", "Run one scenario");
  std::string scenario;
  run->add_option("scenario", scenario, "conservation | persistence | decay_regularity | lipschitz | smoothing_probe")
      ->required();
  run->add_option("--config", config, "Scenario config file")->required();
  run->add_option("--seed", seed, "Override run.seed");
  run->add_option("--out", out, "Output directory (overrides run.out)");
  run->add_option("--calibration", calibration, "Calibration file");

  auto* sw = app.add_subcommand("sweep", "Run several scenarios concurrently");
  unsigned threads = 0;
  sw->add_option("--config", config, "Scenario config file")->required();
  sw->add_option("--out", out, "Output root; each scenario writes to <out>/<scenario>");
  sw->add_option("--threads", threads, "Worker count (0: hardware concurrency)");
  sw->add_option("--calibration", calibration, "Calibration file");

  auto* cal = app.add_subcommand("calibrate", "Regenerate the calibration file");
  std::string output = calibration;
  cal->add_option("--config", config, "Config giving grid, seed and family.size")->required();
  cal->add_option("--output", output, "Where to write the calibration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  if (*run) return run_one(scenario, config, seed, out, calibration);
  if (*sw) return sweep(config, out, calibration, threads);
  return calibrate(config, output);
}
