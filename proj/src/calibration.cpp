#include "kdv5/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "kdv5/evolution.hpp"

#ifndef KDV5_CALIBRATION_FILE
#define KDV5_CALIBRATION_FILE "data/calibration.json"
#endif

namespace kdv5 {

using nlohmann::json;

namespace {

constexpr double kGronwallR = 0.5;
constexpr double kPointwiseR = 0.4;
constexpr double kG5R = 0.5;
constexpr double kFitT = 1.0;
constexpr double kFitDt = 1.0 / 2048.0;

Trajectory fit_run(const Grid& g, const DataSpec& d) {
  EvolutionOptions opts;
  opts.store_every = 16;
  return integrate(make_initial_data(g, d), kFitT, kFitDt, 1, opts);
}

DataSpec gaussian_spec(double amplitude, double width, double center) {
  DataSpec d;
  d.amplitude = amplitude;
  d.width = width;
  d.center = center;
  return d;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

std::filesystem::path default_calibration_path() { return KDV5_CALIBRATION_FILE; }

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration file '" + path.string() + "'");
  const json j = json::parse(in);
  Calibration c;
  c.version = j.at("version").get<int>();
  c.L = j.at("grid").at("L").get<double>();
  c.n = j.at("grid").at("n").get<std::size_t>();
  c.seed = j.at("family").at("seed").get<std::uint64_t>();
  c.draws = j.at("family").at("draws").get<std::size_t>();
  const json& locks = j.at("locks");
  c.interpolation = locks.at("interpolation").get<double>();
  c.leibniz_n1 = locks.at("leibniz_n1").get<double>();
  c.leibniz_n2 = locks.at("leibniz_n2").get<double>();
  c.pointwise = locks.at("pointwise").get<double>();
  c.smoothing = locks.at("smoothing").get<double>();
  const json& fits = j.at("fits");
  c.apriori_C = fits.at("apriori_C").get<double>();
  c.gronwall_B = fits.at("gronwall_B").get<double>();
  c.gronwall_C = fits.at("gronwall_C").get<double>();
  c.g5_C = fits.at("g5_C").get<double>();
  return c;
}

void save_calibration(const Calibration& c, const std::filesystem::path& path) {
  json j;
  j["version"] = c.version;
  j["grid"] = {{"L", c.L}, {"n", c.n}};
  j["family"] = {{"seed", c.seed}, {"draws", c.draws}};
  j["locks"] = {{"interpolation", c.interpolation},
                {"leibniz_n1", c.leibniz_n1},
                {"leibniz_n2", c.leibniz_n2},
                {"pointwise", c.pointwise},
                {"smoothing", c.smoothing}};
  j["fits"] = {{"apriori_C", c.apriori_C},
               {"gronwall_B", c.gronwall_B},
               {"gronwall_C", c.gronwall_C},
               {"g5_C", c.g5_C}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

double interpolation_lock(const Grid& g, std::uint64_t seed, std::size_t draws) {
  double best = 0.0;
  for (const auto& f : random_family(g, seed, draws)) best = std::max(best, interpolation_check(f, 2.0, 0.5, 0.5).ratio());
  return best;
}

double leibniz_lock(const Grid& g, std::uint64_t seed, std::size_t draws, int n) {
  double best = 0.0;
  for (const auto& f : random_family(g, seed, draws)) best = std::max(best, leibniz_check(f, 0.5, n).ratio());
  return best;
}

double pointwise_lock(const Grid& g, std::uint64_t seed, std::size_t draws) {
  double best = 0.0;
  for (const auto& f : random_family(g, seed, draws)) {
    for (double t : {0.25, 0.5, 1.0}) best = std::max(best, pointwise_formula_residual(f, kPointwiseR, t).ratio());
  }
  return best;
}

double smoothing_ratio(const RealField& u0, double T, std::size_t nt) {
  const double norm = l2_norm(u0);
  if (norm == 0.0) throw std::invalid_argument("smoothing_ratio: zero data");
  const Trajectory traj = free_trajectory(u0, T, nt);
  return mixed_spacetime_norm(traj, NormSpec::mixed(kInfExponent, 2.0, Prefix::Dx2)) / norm;
}

double smoothing_lock(const Grid& g, std::uint64_t seed, std::size_t draws) {
  double best = 0.0;
  for (const auto& f : random_family(g, seed, draws)) {
    if (f.max_abs() == 0.0) continue;
    best = std::max(best, smoothing_ratio(f, 1.0, 64));
  }
  return best;
}

bool within_lock(double measured, double locked, double factor) {
  return std::isfinite(measured) && measured <= locked * factor && measured >= locked / factor;
}

std::vector<LockResult> check_locks(const Calibration& cal) {
  const Grid g(cal.L, cal.n);
  std::vector<LockResult> out;
  auto add = [&](std::string name, double measured, double locked) {
    out.push_back({std::move(name), measured, locked, within_lock(measured, locked)});
  };
  add("interpolation", interpolation_lock(g, cal.seed, cal.draws), cal.interpolation);
  add("leibniz_n1", leibniz_lock(g, cal.seed, cal.draws, 1), cal.leibniz_n1);
  add("leibniz_n2", leibniz_lock(g, cal.seed, cal.draws, 2), cal.leibniz_n2);
  add("pointwise", pointwise_lock(g, cal.seed, cal.draws), cal.pointwise);
  add("smoothing", smoothing_lock(g, cal.seed, cal.draws), cal.smoothing);
  return out;
}

std::vector<DataSpec> apriori_family() {
  std::vector<DataSpec> out;
  for (int i = 0; i < 10; ++i) out.push_back(gaussian_spec(0.5 + 0.1 * i, 8.0 - 0.25 * i, 0.0));
  return out;
}

double apriori_ratio(const Trajectory& traj) {
  const AprioriBound b = apriori_h2_bound(traj, 1, 1.0);
  return b.K > 0.0 ? b.max_h2_sq / b.K : 0.0;
}

double gronwall_envelope(double A, double B, double C, double t) {
  if (C == 0.0) return A + B * t + A * t + 0.5 * B * t * t;
  const double e = std::expm1(C * t);
  return A + B * t + A * e / C + B * (e - C * t) / (C * C);
}

DataSpec gronwall_fit_data() { return gaussian_spec(1.0, 8.0, 0.0); }

std::vector<DataSpec> gronwall_holdout_data() {
  return {gaussian_spec(0.8, 7.0, 0.0), gaussian_spec(1.2, 9.0, 0.0), gaussian_spec(1.0, 8.0, 5.0)};
}

std::vector<double> weighted_energy_series(const Trajectory& traj, double r, WeightChoice weight) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& u : traj.fields) {
    const double w = weighted_l2_norm(u, r, weight);
    out.push_back(w * w);
  }
  return out;
}

double g5_ratio(const RealField& u0, double r, double T, std::size_t nt) {
  const Trajectory traj = free_trajectory(u0, T, nt);
  const double lambda5 = mixed_spacetime_norm(traj, NormSpec::weighted(r, WeightChoice::smooth()));
  const double base = weighted_l2_norm(u0, r);
  const double unit = (1.0 + T) * (l2_norm(u0) + l2_norm(fractional_derivative(u0, 4.0 * r)));
  if (unit == 0.0) return 0.0;
  return std::max(0.0, lambda5 - base) / unit;
}

FitReport fit_apriori(const Grid& g) {
  FitReport rep;
  const auto family = apriori_family();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double ratio = apriori_ratio(fit_run(g, family[i]));
    (i % 2 == 0 ? rep.fit_ratios : rep.holdout_ratios).push_back(ratio);
  }
  rep.constant = kFitSafety * max_of(rep.fit_ratios);
  for (double& r : rep.holdout_ratios) r /= rep.constant;
  for (double& r : rep.fit_ratios) r /= rep.constant;
  return rep;
}

namespace {

// Smallest B >= 0 with the envelope above the series; the envelope is
// affine in B.
double minimal_B(const Trajectory& traj, const std::vector<double>& W, double C) {
  const double A = W.front();
  double B = 0.0;
  for (std::size_t i = 1; i < W.size(); ++i) {
    const double t = traj.times[i];
    const double base = gronwall_envelope(A, 0.0, C, t);
    const double slope = gronwall_envelope(0.0, 1.0, C, t);
    B = std::max(B, (W[i] - base) / slope);
  }
  return B;
}

double envelope_ratio(const Trajectory& traj, const std::vector<double>& W, double B, double C) {
  double worst = 0.0;
  for (std::size_t i = 1; i < W.size(); ++i) {
    const double E = gronwall_envelope(W.front(), B, C, traj.times[i]);
    if (E > 0.0) worst = std::max(worst, W[i] / E);
  }
  return worst;
}

}  // namespace

FitReport fit_gronwall(const Grid& g) {
  FitReport rep;
  const double C = 1.0;
  const Trajectory fit = fit_run(g, gronwall_fit_data());
  const auto W = weighted_energy_series(fit, kGronwallR);
  rep.constant = kFitSafety * minimal_B(fit, W, C);
  rep.fit_ratios.push_back(envelope_ratio(fit, W, rep.constant, C));
  for (const auto& d : gronwall_holdout_data()) {
    const Trajectory traj = fit_run(g, d);
    rep.holdout_ratios.push_back(envelope_ratio(traj, weighted_energy_series(traj, kGronwallR), rep.constant, C));
  }
  return rep;
}

FitReport fit_g5(const Grid& g, std::uint64_t seed) {
  FitReport rep;
  for (const auto& f : random_family(g, seed, 10)) rep.fit_ratios.push_back(g5_ratio(f, kG5R, 1.0, 32));
  rep.constant = kFitSafety * max_of(rep.fit_ratios);
  for (const auto& f : random_family(g, seed + 1, 10)) {
    rep.holdout_ratios.push_back(g5_ratio(f, kG5R, 1.0, 32) / rep.constant);
  }
  for (double& r : rep.fit_ratios) r /= rep.constant;
  return rep;
}

Calibration calibrate(double L, std::size_t n, std::uint64_t seed, std::size_t draws) {
  Calibration c;
  c.L = L;
  c.n = n;
  c.seed = seed;
  c.draws = draws;
  const Grid g(L, n);
  c.interpolation = interpolation_lock(g, seed, draws);
  c.leibniz_n1 = leibniz_lock(g, seed, draws, 1);
  c.leibniz_n2 = leibniz_lock(g, seed, draws, 2);
  c.pointwise = pointwise_lock(g, seed, draws);
  c.smoothing = smoothing_lock(g, seed, draws);
  c.apriori_C = fit_apriori(g).constant;
  c.gronwall_B = fit_gronwall(g).constant;
  c.gronwall_C = 1.0;
  c.g5_C = fit_g5(g, seed).constant;
  return c;
}

}  // namespace kdv5
