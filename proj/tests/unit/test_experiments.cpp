#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "helpers.hpp"
#include "kdv5/calibration.hpp"
#include "kdv5/config.hpp"
#include "kdv5/errors.hpp"
#include "kdv5/report.hpp"
#include "kdv5/scenarios.hpp"

using namespace kdv5;
using testing::kPi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kdv5_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// A cheap k = 1 setup shared by the run-level tests.
const char* kSmallConfig = R"(
[run]
k = 1
T = 0.125
dt = 0.0078125
store_every = 2
seed = 3
[grid]
n = 256
[data]
family = gaussian
width = 8
[lipschitz]
eps = 0.01, 0.001
)";

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + KDV5_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const ScenarioConfig c = parse_config_text("[run]\nk = 1\n[data]\nfamily = gaussian\n");
  CHECK(c.half_width() == doctest::Approx(32 * kPi).epsilon(1e-15));
  CHECK(c.points() == 1024);
  CHECK(c.step() == doctest::Approx(1.0 / 2048));
  CHECK(c.resolved_data().center == 0.0);
  CHECK(c.resolved_data().width == 8.0);

  const ScenarioConfig c2 = parse_config_text("[run]\nk = 2  # mKdV\n[data]\nfamily = sech2\n");
  CHECK(c2.points() == 2048);
  CHECK(c2.resolved_data().center == doctest::Approx(-16 * kPi));
  CHECK(c2.resolved_data().kind == DataKind::Sech2);

  const ScenarioConfig c3 = parse_config_text(
      "; comment\n[run]\nk = 2\nscenario = decay-regularity\nscheme = picard\n[grid]\nL = 0.5pi\nn = 64\n"
      "[data]\nfamily = random\ncenter = 2\n[params]\nN = 4\n[sweep]\nscenarios = conservation, lipschitz\n");
  CHECK(c3.scenario == "decay_regularity");
  CHECK(c3.scheme == Scheme::Picard);
  CHECK(c3.half_width() == doctest::Approx(kPi / 2));
  CHECK(c3.points() == 64);
  CHECK(c3.resolved_data().center == 2.0);
  REQUIRE(c3.N.has_value());
  CHECK(*c3.N == 4.0);
  CHECK(c3.sweep == std::vector<std::string>{"conservation", "lipschitz"});
}

TEST_CASE("number parsing") {
  CHECK(parse_number("32pi") == doctest::Approx(32 * kPi).epsilon(1e-15));
  CHECK(parse_number("pi") == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK_THROWS_AS(parse_number("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number("3x"), std::invalid_argument);
}

TEST_CASE("config errors") {
  try {
    parse_config_text("[run]\nk = 1\nfoo = 2\n[data]\nfamily = gaussian\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  try {
    parse_config_text("[data]\nfamily = gaussian\n");
    FAIL("missing run.k accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.k") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[run]\nk = 1\nk = 1\n[data]\nfamily = gaussian\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nk = 3\n[data]\nfamily = gaussian\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nk = 1\n[data]\nfamily = square\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nk = 1\nscenario = nope\n[data]\nfamily = gaussian\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[bogus]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/kdv5.cfg"), ConfigError);

  ScenarioConfig c = parse_config_text("[run]\nk = 1\n[data]\nfamily = gaussian\n");
  c.scenario = "decay_regularity";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.k = 2;
  CHECK_NOTHROW(validate(c));
  c.alpha = 0.2;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("every shipped config parses and validates") {
  for (const auto& entry : fs::directory_iterator(fs::path(KDV5_SOURCE_DIR) / "configs")) {
    CAPTURE(entry.path().string());
    ScenarioConfig c;
    CHECK_NOTHROW(c = parse_config(entry.path()));
    CHECK_NOTHROW(validate(c));
  }
}

TEST_CASE("series CSV layout") {
  SeriesRow r;
  r.t = 0.5;
  r.lambda = {1, 2, 3, 4, std::nan("")};
  const std::string csv = series_csv({r});
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "t,I1,I2,H2,Hs_target,weighted_r,lambda1,lambda2,lambda3,lambda4,lambda5");
  CHECK(line == "0.5,0,0,0,0,0,1,2,3,4,nan");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(INFINITY) == "inf");
}

TEST_CASE("conservation run: output files and determinism") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.scenario = "conservation";
  const ScenarioResult a = run_conservation(c);
  const ScenarioResult b = run_conservation(c);
  CHECK(a.passed());
  CHECK(series_csv(a.series) == series_csv(b.series));
  CHECK(summary_json(a) == summary_json(b));
  CHECK(a.series.size() == 9);

  const fs::path dir = scratch("emit");
  emit(a, dir);
  CHECK(slurp(dir / "series.csv") == series_csv(a.series));
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j.at("scenario") == "conservation");
  CHECK(j.at("seed") == 3);
  CHECK(j.at("passed") == true);
  CHECK(j.at("parameters").at("grid").at("n") == 256);
  CHECK(j.at("assertions").size() == 3);
  for (const auto& as : j.at("assertions")) CHECK(as.at("margin").get<double>() >= 0.0);
  CHECK(!fs::exists(dir / "series.csv.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("zero data has zero drift") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.data.amplitude = 0.0;
  const ScenarioResult r = run_conservation(c);
  for (const auto& [name, value] : r.metrics) {
    if (name == "I1_drift" || name == "I2_drift" || name == "contamination") CHECK(value == 0.0);
  }
  CHECK(r.passed());
}

TEST_CASE("persistence on zero data stays at zero") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.scenario = "persistence";
  c.data.amplitude = 0.0;
  Calibration cal;
  cal.gronwall_B = 0.0;
  cal.gronwall_C = 1.0;
  const ScenarioResult r = run_persistence(c, cal);
  CHECK(r.passed());
  CHECK(r.assertions.front().value == 0.0);
}

TEST_CASE("decay-regularity on the linear flow is resolution independent") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.scenario = "decay_regularity";
  c.k = 2;
  c.nonlinear = false;
  c.n = 512;
  const ScenarioResult r = run_decay_regularity(c);
  double ratio = 0.0;
  for (const auto& [name, value] : r.metrics) {
    if (name == "ratio") ratio = value;
  }
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.passed());
  REQUIRE(r.extra_series.size() == 1);
  CHECK(r.extra_series.front().first == "series_2n");
}

TEST_CASE("Lipschitz with zero perturbation") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.scenario = "lipschitz";
  c.eps = {0.0};
  const ScenarioResult r = run_lipschitz(c);
  bool seen = false;
  for (const auto& [name, value] : r.metrics) {
    if (name.rfind("difference_eps_", 0) == 0) {
      CHECK(value == 0.0);
      seen = true;
    }
  }
  CHECK(seen);
  CHECK(r.assertions.empty());
}

TEST_CASE("Lipschitz ratios are stable across eps") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  c.scenario = "lipschitz";
  const ScenarioResult r = run_lipschitz(c);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.passed());
}

TEST_CASE("smoothing ratio of cos over a full period") {
  // d_x^2 W(t) cos = -cos(x - t); its L^2 norm over t in [0, 2pi] is sqrt(pi)
  // at every x, and ||cos||_L2 = sqrt(pi) on [-pi, pi).
  const Grid g(kPi, 32);
  const RealField c = RealField::from_function(g, [](double x) { return std::cos(x); });
  CHECK(smoothing_ratio(c, 2 * kPi, 64) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(smoothing_ratio(RealField::zeros(g), 1.0, 8), std::invalid_argument);
}

TEST_CASE("calibration file round trip") {
  Calibration c;
  c.L = 32 * kPi;
  c.n = 1024;
  c.seed = 7;
  c.draws = 100;
  c.interpolation = 0.1;
  c.leibniz_n1 = 0.2;
  c.leibniz_n2 = 0.3;
  c.pointwise = 0.4;
  c.smoothing = 0.5;
  c.apriori_C = 0.6;
  c.gronwall_B = 0.7;
  c.gronwall_C = 1.0;
  c.g5_C = 0.8;
  const fs::path dir = scratch("cal");
  save_calibration(c, dir / "cal.json");
  const Calibration d = load_calibration(dir / "cal.json");
  CHECK(d.L == c.L);
  CHECK(d.n == c.n);
  CHECK(d.seed == c.seed);
  CHECK(d.draws == c.draws);
  CHECK(d.interpolation == c.interpolation);
  CHECK(d.leibniz_n1 == c.leibniz_n1);
  CHECK(d.leibniz_n2 == c.leibniz_n2);
  CHECK(d.pointwise == c.pointwise);
  CHECK(d.smoothing == c.smoothing);
  CHECK(d.apriori_C == c.apriori_C);
  CHECK(d.gronwall_B == c.gronwall_B);
  CHECK(d.g5_C == c.g5_C);
  fs::remove_all(dir);
  CHECK_THROWS(load_calibration(dir / "missing.json"));
}

TEST_CASE("lock tolerance is two-sided") {
  CHECK(within_lock(1.0, 1.0));
  CHECK(within_lock(1.049, 1.0));
  CHECK(!within_lock(1.06, 1.0));
  CHECK(within_lock(0.96, 1.0));
  CHECK(!within_lock(0.94, 1.0));
  CHECK(!within_lock(std::nan(""), 1.0));
}

TEST_CASE("Gronwall envelope") {
  // C = 0: A + Bt + At + Bt^2/2.
  CHECK(gronwall_envelope(2.0, 3.0, 0.0, 1.0) == doctest::Approx(2 + 3 + 2 + 1.5));
  CHECK(gronwall_envelope(2.0, 0.0, 1.0, 0.0) == 2.0);
  // B = 0, C = 1: A + A (e^t - 1) = A e^t.
  CHECK(gronwall_envelope(2.0, 0.0, 1.0, 1.3) == doctest::Approx(2.0 * std::exp(1.3)).epsilon(1e-14));
  // The C -> 0 limit is continuous.
  CHECK(gronwall_envelope(1.0, 2.0, 1e-7, 0.8) == doctest::Approx(gronwall_envelope(1.0, 2.0, 0.0, 0.8)).epsilon(1e-6));
}

TEST_CASE("fitted constants hold on their holdout sets") {
  const Grid g(32 * kPi, 1024);
  for (const FitReport& rep : {fit_apriori(g), fit_gronwall(g), fit_g5(g, 7)}) {
    CHECK(std::isfinite(rep.constant));
    CHECK(!rep.holdout_ratios.empty());
    for (double r : rep.fit_ratios) CHECK(r <= 1.0);
    for (double r : rep.holdout_ratios) CHECK(r <= 1.0);
  }
}

TEST_CASE("sweep writes the same files as sequential runs") {
  ScenarioConfig c = parse_config_text(kSmallConfig);
  const fs::path root = scratch("sweep");
  c.out = root / "parallel";
  c.sweep = {"conservation", "lipschitz", "persistence"};
  Calibration cal;
  cal.gronwall_C = 1.0;
  cal.gronwall_B = 1.0;
  const auto outcomes = run_sweep(c, cal, 3);
  REQUIRE(outcomes.size() == 3);
  for (const auto& o : outcomes) {
    CAPTURE(o.scenario);
    CHECK(o.exit_code == 0);
    ScenarioConfig s = c;
    s.scenario = o.scenario;
    const ScenarioResult r = run_scenario(s, cal);
    emit(r, root / "sequential" / o.scenario);
    CHECK(slurp(root / "parallel" / o.scenario / "series.csv") == slurp(root / "sequential" / o.scenario / "series.csv"));
    CHECK(slurp(root / "parallel" / o.scenario / "summary.json") ==
          slurp(root / "sequential" / o.scenario / "summary.json"));
  }
  fs::remove_all(root);
}

TEST_CASE("CLI exit codes") {
  const fs::path dir = scratch("cli");
  const std::string out = " --out \"" + (dir / "out").string() + "\"";
  write_file(dir / "ok.cfg", kSmallConfig);
  write_file(dir / "strict.cfg", std::string(kSmallConfig) + "[tolerance]\ncontamination = 1e-300\n");
  std::string huge = kSmallConfig;
  huge.replace(huge.find("width = 8"), 9, "width = 8\namplitude = 1e9");
  write_file(dir / "huge.cfg", huge);
  write_file(dir / "bad.cfg", std::string(kSmallConfig) + "[params]\nfoo = 1\n");

  CHECK(run_cli("run conservation --config \"" + (dir / "ok.cfg").string() + "\"" + out) == 0);
  CHECK(fs::exists(dir / "out" / "series.csv"));
  CHECK(run_cli("run conservation --config \"" + (dir / "strict.cfg").string() + "\"" + out) == 2);
  CHECK(run_cli("run conservation --config \"" + (dir / "huge.cfg").string() + "\"" + out) == 3);
  const auto failure = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(failure.at("passed") == false);
  CHECK(failure.contains("error"));
  CHECK(run_cli("run conservation --config \"" + (dir / "bad.cfg").string() + "\"" + out) == 4);
  CHECK(run_cli("run nonsense --config \"" + (dir / "ok.cfg").string() + "\"" + out) == 4);
  CHECK(run_cli("run conservation") == 4);
  CHECK(run_cli("run conservation --config \"" + (dir / "missing.cfg").string() + "\"" + out) == 4);
  fs::remove_all(dir);
}
