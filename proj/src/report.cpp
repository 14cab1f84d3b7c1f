#include "kdv5/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kdv5/weights.hpp"

namespace kdv5 {

using nlohmann::json;

namespace {

json config_json(const ScenarioConfig& cfg) {
  const DataSpec d = cfg.resolved_data();
  const Grid g(cfg.half_width(), cfg.points());
  json j;
  j["run"] = {{"scenario", cfg.scenario},
              {"k", cfg.k},
              {"seed", cfg.seed},
              {"T", cfg.T},
              {"dt", cfg.step()},
              {"nt", cfg.nt},
              {"store_every", cfg.store_every},
              {"scheme", to_string(cfg.scheme)},
              {"nonlinear", cfg.nonlinear},
              {"dealias", cfg.dealias}};
  j["grid"] = {{"L", cfg.half_width()}, {"n", cfg.points()}};
  j["data"] = {{"family", to_string(d.kind)},
               {"amplitude", d.amplitude},
               {"width", d.width},
               {"center", d.center},
               {"band", d.band}};
  j["params"] = {{"r", cfg.r},
                 {"alpha", cfg.alpha},
                 {"N", WeightChoice{cfg.N}.resolve(g)},
                 {"rho", cfg.rho},
                 {"tol", cfg.tol},
                 {"max_iter", cfg.max_iter},
                 {"s_target", cfg.s_target}};
  j["tolerance"] = {{"drift_I1", cfg.drift_I1},
                    {"drift_I2", cfg.drift_I2},
                    {"contamination", cfg.contamination},
                    {"delta", cfg.delta},
                    {"lipschitz_spread", cfg.lipschitz_spread},
                    {"bound_slack", cfg.bound_slack}};
  j["lipschitz"] = {{"eps", cfg.eps}};
  j["family"] = {{"size", cfg.family_size}};
  j["sweep"] = {{"scenarios", cfg.sweep}};
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.I1) << ',' << format_number(r.I2) << ','
        << format_number(r.H2) << ',' << format_number(r.Hs_target) << ',' << format_number(r.weighted_r);
    for (double l : r.lambda) out << ',' << format_number(l);
    out << '\n';
  }
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::ostringstream out;
  write_series_csv(out, rows);
  return out.str();
}

std::string summary_json(const ScenarioResult& result) {
  json j;
  j["scenario"] = result.scenario;
  j["seed"] = result.config.seed;
  j["passed"] = result.passed();
  j["parameters"] = config_json(result.config);
  json assertions = json::array();
  for (const auto& a : result.assertions) {
    assertions.push_back({{"name", a.name},
                          {"value", a.value},
                          {"limit", a.limit},
                          {"kind", a.upper ? "upper" : "lower"},
                          {"margin", a.margin()},
                          {"passed", a.passed()}});
  }
  j["assertions"] = assertions;
  json metrics = json::object();
  for (const auto& [name, value] : result.metrics) metrics[name] = value;
  j["metrics"] = metrics;
  json checks = json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ratio", c.ratio}});
  }
  j["checks"] = checks;
  json files = json::array({"series.csv"});
  for (const auto& [stem, rows] : result.extra_series) files.push_back(stem + ".csv");
  j["files"] = files;
  return j.dump(2) + "\n";
}

std::string failure_json(const ScenarioConfig& cfg, const std::string& error) {
  json j;
  j["scenario"] = cfg.scenario;
  j["seed"] = cfg.seed;
  j["passed"] = false;
  j["error"] = error;
  j["parameters"] = config_json(cfg);
  return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void emit(const ScenarioResult& result, const std::filesystem::path& dir) {
  write_atomic(dir / "series.csv", series_csv(result.series));
  for (const auto& [stem, rows] : result.extra_series) write_atomic(dir / (stem + ".csv"), series_csv(rows));
  write_atomic(dir / "summary.json", summary_json(result));
}

}  // namespace kdv5
