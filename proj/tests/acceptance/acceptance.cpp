// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kdv5/calibration.hpp"
#include "kdv5/diagnostics.hpp"
#include "kdv5/evolution.hpp"
#include "kdv5/families.hpp"
#include "kdv5/report.hpp"
#include "kdv5/scenarios.hpp"
#include "kdv5/weights.hpp"

using namespace kdv5;

namespace {

constexpr double kBox = 32.0 * std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator()(const char* name, T value) {
    if (out_.tellp() > 0) out_ << ' ';
    out_ << name << '=' << value;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

double metric(const ScenarioResult& r, const std::string& name) {
  for (const auto& [k, v] : r.metrics) {
    if (k == name) return v;
  }
  return std::nan("");
}

ScenarioConfig base_config(int k) {
  ScenarioConfig c;
  c.k = k;
  c.T = 1.0;
  return c;
}

Outcome free_group() {
  const Grid g(kBox, 1024);
  Rng rng(20);
  double iso = 0.0, law = 0.0;
  for (int i = 0; i < 20; ++i) {
    const RealField f = random_schwartz(g, rng, 1.0, 6.0, rng.uniform(-5.0, 5.0), 1.0);
    const double n0 = l2_norm(f);
    const double s = rng.uniform(-1.0, 1.0);
    const double t = rng.uniform(-1.0, 1.0);
    iso = std::max(iso, std::abs(l2_norm(free_propagate(f, t)) - n0) / n0);
    law = std::max(law, l2_norm(free_propagate(free_propagate(f, t), s) - free_propagate(f, s + t)) / n0);
  }
  Detail d;
  d("isometry", iso)("group_law", law);
  return {iso <= 1e-13 && law <= 1e-12, d.str()};
}

Outcome conservation() {
  Detail d;
  bool ok = true;
  for (int k : {1, 2}) {
    ScenarioConfig c = base_config(k);
    const ScenarioResult r = run_conservation(c);
    const double i1 = metric(r, "I1_drift");
    const double i2 = metric(r, "I2_drift");
    ok = ok && i1 <= 1e-8 && i2 <= 1e-6;
    d(k == 1 ? "k1_I1" : "k2_I1", i1)(k == 1 ? "k1_I2" : "k2_I2", i2);
  }
  return {ok, d.str()};
}

Outcome integrator_order() {
  const Grid g(kBox, 1024);
  const RealField u0 = gaussian(g, 1.0, 8.0, 0.0);
  const RealField ref = integrate(u0, 1.0, 1.0 / 1024, 1).final();
  std::vector<double> x, y;
  for (int m : {16, 32, 64, 128}) {
    x.push_back(std::log(1.0 / m));
    y.push_back(std::log(l2_norm(integrate(u0, 1.0, 1.0 / m, 1).final() - ref)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / 4;
    my += y[i] / 4;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  Detail d;
  d("slope", slope);
  return {std::abs(slope - 4.0) <= 0.3, d.str()};
}

Outcome picard_reference() {
  const Grid g(kBox, 1024);
  const RealField u0 = gaussian(g, 1.0, 8.0, 0.0);
  const double tol = 1e-12;
  const Trajectory p = picard_solve(u0, 0.05, 64, 1, tol, 60);
  const Trajectory e = integrate(u0, 0.05, 0.05 / 64, 1);
  const double diff = l2_norm(p.final() - e.final());
  const double res = duhamel_residual(p, 1);
  Detail d;
  d("l2_difference", diff)("duhamel_residual", res)("iterations", p.iterations);
  return {diff <= 1e-6 && res <= 10 * tol, d.str()};
}

Outcome mkdv_bound() {
  const Grid g(kBox, 2048);
  bool ok = true;
  Detail d;
  // ETDRK4 at T = 1 and a converged Picard run.
  EvolutionOptions o;
  o.store_every = 16;
  const Trajectory a = integrate(gaussian(g, 1.0, 8.0, -kBox / 2), 1.0, 1.0 / 2048, 2, o);
  const Trajectory b = picard_solve(gaussian(g, 1.0, 8.0, -kBox / 2), 0.05, 64, 2, 1e-12, 60);
  for (const auto* t : {&a, &b}) {
    const SecondDerivativeBound m = mkdv_second_derivative_bound(*t);
    ok = ok && m.max_d2_sq <= m.bound + 1e-6;
    d(t == &a ? "etdrk4_sup" : "picard_sup", m.max_d2_sq)(t == &a ? "etdrk4_bound" : "picard_bound", m.bound);
  }
  return {ok, d.str()};
}

Outcome weight_suite() {
  const std::vector<double> Ns = {4.0, 8.0, 16.0};
  const double alpha = 0.125;
  std::size_t violations = 0;
  double worst_spread = 0.0;
  auto spread_of = [&](const std::vector<WeightBoundRow>& rows) {
    for (int j = 1; j <= 5; ++j) {
      double lo = INFINITY, hi = 0.0;
      for (const auto& r : rows) {
        if (r.j != j) continue;
        if (!std::isfinite(r.constant)) ++violations;
        lo = std::min(lo, r.constant);
        hi = std::max(hi, r.constant);
      }
      if (hi > 0.0) worst_spread = std::max(worst_spread, hi / lo);
    }
  };

  const Grid g(kBox, 2048);
  for (double N : Ns) {
    const WeightFamily w = sample_truncated(g, N);
    const auto& v = w.values();
    const auto bracket = smooth_weight(g, 0.5, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double ax = std::abs(g.x(i));
      if (ax <= N && v[i] != bracket[i]) ++violations;
      if (ax >= 3 * N && v[i] != 2 * N) ++violations;
    }
    for (std::size_t i = g.size() / 2; i + 1 < g.size(); ++i) violations += v[i + 1] < v[i];
    for (std::size_t i = g.size() / 2; i > 0; --i) violations += v[i - 1] < v[i];
    if (truncated_weight_jet(0.0, N).value() != 1.0 || truncated_weight_jet(4 * N, N).value() != 2 * N) ++violations;
  }
  spread_of(verify_weight_bounds(g, WeightKind::Truncated, Ns, {1, 2, 3, 4, 5}));

  // The odd weights plateau at 10N; N = 16 needs L > 178.
  const Grid wide(64.0 * std::numbers::pi, 4096);
  for (bool tilde : {false, true}) {
    const double beta = tilde ? alpha : alpha + 0.5;
    for (double N : Ns) {
      const WeightFamily w = sample_odd(wide, N, alpha, tilde);
      const auto& v = w.values();
      if (v[wide.size() / 2] != 0.0) ++violations;
      for (std::size_t i = 1; i < wide.size(); ++i) {
        const double x = wide.x(i);
        if (v[wide.size() - i] != -v[i]) ++violations;
        if (w.derivatives[1][i] < 0.0) ++violations;
        if (x >= 10 * N && v[i] != std::pow(2 * N * N, beta)) ++violations;
        if (x >= 0.0 && x <= N && std::abs(v[i] - (std::pow(1 + x * x, beta) - 1)) > 1e-12) ++violations;
      }
    }
    const auto rows = verify_weight_bounds(wide, tilde ? WeightKind::OddTilde : WeightKind::Odd, Ns,
                                           tilde ? std::vector<int>{1, 2, 3, 4, 5} : std::vector<int>{2, 3, 4, 5},
                                           alpha);
    spread_of(rows);
  }
  Detail d;
  d("violations", violations)("worst_N_spread", worst_spread);
  return {violations == 0 && worst_spread <= 2.0, d.str()};
}

Outcome locks() {
  const Calibration cal = load_calibration(default_calibration_path());
  bool ok = true;
  Detail d;
  for (const LockResult& r : check_locks(cal)) {
    ok = ok && r.passed;
    d(r.name.c_str(), r.measured / r.locked);
  }
  return {ok, d.str()};
}

Outcome energy_identity() {
  const Grid g(kBox, 4096);
  EvolutionOptions o;
  o.store_every = 16;
  const Trajectory t = integrate(gaussian(g, 1.0, 8.0, 0.0), 1.0, 1.0 / 1024, 1, o);
  std::vector<double> res;
  for (std::size_t stride : {8, 4, 2, 1}) {
    Trajectory s = t;
    s.times.clear();
    s.fields.clear();
    for (std::size_t i = 0; i < t.size(); i += stride) {
      s.times.push_back(t.times[i]);
      s.fields.push_back(t.fields[i]);
    }
    res.push_back(weighted_energy_residual(s, 0.5, 1, WeightChoice::truncated(8.0)));
  }
  double order = INFINITY;
  for (std::size_t i = 0; i + 1 < res.size(); ++i) order = std::min(order, std::log2(res[i] / res[i + 1]));
  const double flat = weighted_energy_residual(t, 0.0, 1);
  Detail d;
  d("min_order", order)("finest_residual", res.back())("p1_residual", flat);
  return {order >= 1.8 && flat <= 1e-8, d.str()};
}

Outcome decay_regularity() {
  ScenarioConfig c = base_config(2);
  c.scenario = "decay_regularity";
  c.alpha = 0.125;
  const ScenarioResult r = run_decay_regularity(c);
  const double ratio = metric(r, "ratio");
  Detail d;
  d("s", metric(r, "s"))("ratio", ratio);
  return {std::abs(ratio - 1.0) <= 0.05, d.str()};
}

Outcome determinism() {
  ScenarioConfig c = base_config(1);
  c.seed = 11;
  c.data.kind = DataKind::RandomSchwartz;
  c.data.seed = 11;
  const std::string a = series_csv(run_conservation(c).series);
  const std::string b = series_csv(run_conservation(c).series);
  Detail d;
  d("bytes", a.size())("identical", a == b ? "yes" : "no");
  return {a == b && !a.empty(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"free_group_exactness", free_group},
      {"conservation", conservation},
      {"integrator_order", integrator_order},
      {"picard_reference_agreement", picard_reference},
      {"mkdv_constant_free_bound", mkdv_bound},
      {"weight_suite", weight_suite},
      {"inequality_ratio_locks", locks},
      {"weighted_energy_identity", energy_identity},
      {"decay_regularity_surrogate", decay_regularity},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s  %s  (%.1fs)\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.passed;
  }
  return failures == 0 ? 0 : 1;
}
