#include "kdv5/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kdv5/errors.hpp"

namespace kdv5 {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::uint64_t parse_unsigned(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) { return static_cast<std::size_t>(parse_unsigned(s)); }

Scheme parse_scheme(const std::string& s) {
  if (s == "etdrk4") return Scheme::Etdrk4;
  if (s == "picard") return Scheme::Picard;
  throw std::invalid_argument("scheme must be etdrk4 or picard, got '" + s + "'");
}

const std::set<std::string>& scenario_names() {
  static const std::set<std::string> names = {"conservation", "persistence", "decay_regularity", "lipschitz",
                                              "smoothing_probe"};
  return names;
}

std::string normalize_scenario(std::string s) {
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  if (!scenario_names().contains(s)) throw std::invalid_argument("unknown scenario '" + s + "'");
  return s;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.scenario", [](ScenarioConfig& c, const std::string& v) { c.scenario = normalize_scenario(v); }},
      {"run.k",
       [](ScenarioConfig& c, const std::string& v) {
         c.k = static_cast<int>(parse_unsigned(v));
         check_power(c.k);
       }},
      {"run.seed", [](ScenarioConfig& c, const std::string& v) { c.seed = parse_unsigned(v); }},
      {"run.out", [](ScenarioConfig& c, const std::string& v) { c.out = v; }},
      {"run.T", [](ScenarioConfig& c, const std::string& v) { c.T = parse_number(v); }},
      {"run.dt", [](ScenarioConfig& c, const std::string& v) { c.dt = parse_number(v); }},
      {"run.nt", [](ScenarioConfig& c, const std::string& v) { c.nt = parse_count(v); }},
      {"run.store_every", [](ScenarioConfig& c, const std::string& v) { c.store_every = parse_count(v); }},
      {"run.scheme", [](ScenarioConfig& c, const std::string& v) { c.scheme = parse_scheme(v); }},
      {"run.nonlinear", [](ScenarioConfig& c, const std::string& v) { c.nonlinear = parse_bool(v); }},
      {"run.dealias", [](ScenarioConfig& c, const std::string& v) { c.dealias = parse_bool(v); }},
      {"grid.L", [](ScenarioConfig& c, const std::string& v) { c.L = parse_number(v); }},
      {"grid.n", [](ScenarioConfig& c, const std::string& v) { c.n = parse_count(v); }},
      {"data.family", [](ScenarioConfig& c, const std::string& v) { c.data.kind = data_kind_from_string(v); }},
      {"data.amplitude", [](ScenarioConfig& c, const std::string& v) { c.data.amplitude = parse_number(v); }},
      {"data.width", [](ScenarioConfig& c, const std::string& v) { c.data.width = parse_number(v); }},
      {"data.center",
       [](ScenarioConfig& c, const std::string& v) {
         c.data.center = parse_number(v);
         c.center_set = true;
       }},
      {"data.band", [](ScenarioConfig& c, const std::string& v) { c.data.band = parse_number(v); }},
      {"params.r", [](ScenarioConfig& c, const std::string& v) { c.r = parse_number(v); }},
      {"params.alpha", [](ScenarioConfig& c, const std::string& v) { c.alpha = parse_number(v); }},
      {"params.N", [](ScenarioConfig& c, const std::string& v) { c.N = parse_number(v); }},
      {"params.rho", [](ScenarioConfig& c, const std::string& v) { c.rho = parse_number(v); }},
      {"params.tol", [](ScenarioConfig& c, const std::string& v) { c.tol = parse_number(v); }},
      {"params.max_iter", [](ScenarioConfig& c, const std::string& v) { c.max_iter = static_cast<int>(parse_unsigned(v)); }},
      {"params.s_target", [](ScenarioConfig& c, const std::string& v) { c.s_target = parse_number(v); }},
      {"tolerance.drift_I1", [](ScenarioConfig& c, const std::string& v) { c.drift_I1 = parse_number(v); }},
      {"tolerance.drift_I2", [](ScenarioConfig& c, const std::string& v) { c.drift_I2 = parse_number(v); }},
      {"tolerance.contamination", [](ScenarioConfig& c, const std::string& v) { c.contamination = parse_number(v); }},
      {"tolerance.delta", [](ScenarioConfig& c, const std::string& v) { c.delta = parse_number(v); }},
      {"tolerance.lipschitz_spread",
       [](ScenarioConfig& c, const std::string& v) { c.lipschitz_spread = parse_number(v); }},
      {"tolerance.bound_slack", [](ScenarioConfig& c, const std::string& v) { c.bound_slack = parse_number(v); }},
      {"lipschitz.eps",
       [](ScenarioConfig& c, const std::string& v) {
         c.eps.clear();
         for (const auto& item : split_list(v)) c.eps.push_back(parse_number(item));
       }},
      {"family.size", [](ScenarioConfig& c, const std::string& v) { c.family_size = parse_count(v); }},
      {"sweep.scenarios",
       [](ScenarioConfig& c, const std::string& v) {
         c.sweep.clear();
         for (const auto& item : split_list(v)) c.sweep.push_back(normalize_scenario(item));
       }},
  };
  return table;
}

}  // namespace

double parse_number(const std::string& text) {
  std::string s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return factor;
    if (s == "-") return -factor;
    if (s.back() == '*') s = trim(s.substr(0, s.size() - 1));
  }
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a number, got '" + text + "'");
  }
  return v * factor;
}

double ScenarioConfig::half_width() const { return L > 0.0 ? L : 32.0 * std::numbers::pi; }

std::size_t ScenarioConfig::points() const { return n > 0 ? n : (k == 2 ? 2048 : 1024); }

double ScenarioConfig::step() const { return dt > 0.0 ? dt : T / 2048.0; }

DataSpec ScenarioConfig::resolved_data() const {
  DataSpec d = data;
  d.seed = seed;
  if (!center_set) d.center = k == 2 ? -0.5 * half_width() : 0.0;
  return d;
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ConfigError("unknown key '" + full + "'", line);
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'", line);
    try {
      it->second(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError(full + ": " + e.what(), line);
    }
  }
  for (const char* required : {"run.k", "data.family"}) {
    if (!seen.contains(required)) throw ConfigError(std::string("missing required key '") + required + "'", 0);
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(what, 0); };
  if (cfg.k != 1 && cfg.k != 2) fail("run.k must be 1 or 2");
  if (!scenario_names().contains(cfg.scenario)) fail("unknown scenario '" + cfg.scenario + "'");
  if (!(cfg.T > 0.0)) fail("run.T must be positive");
  if (cfg.dt < 0.0) fail("run.dt must be positive");
  const double steps = cfg.T / cfg.step();
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) fail("run.T must be an integer multiple of run.dt");
  if (cfg.nt < 2) fail("run.nt must be at least 2");
  if (cfg.store_every < 1) fail("run.store_every must be at least 1");
  if (!(cfg.L >= 0.0)) fail("grid.L must be positive");
  const std::size_t n = cfg.points();
  if (n < 8 || n % 2 != 0) fail("grid.n must be even and at least 8");
  if (!(cfg.data.width > 0.0)) fail("data.width must be positive");
  if (!(cfg.data.band >= 0.0)) fail("data.band must be non-negative");
  if (!(cfg.rho > 0.75)) fail("params.rho must exceed 3/4");
  if (!(cfg.r >= 0.0)) fail("params.r must be non-negative");
  if (!(cfg.tol > 0.0)) fail("params.tol must be positive");
  if (cfg.max_iter < 1) fail("params.max_iter must be at least 1");
  if (cfg.N && !(*cfg.N >= 1.0)) fail("params.N must be at least 1");
  if (cfg.scenario == "decay_regularity") {
    if (cfg.k != 2) fail("decay_regularity requires run.k = 2");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 0.125)) fail("params.alpha must lie in (0, 1/8]");
  }
  if (cfg.scenario == "lipschitz" && cfg.eps.empty()) fail("lipschitz.eps must list at least one size");
  if (cfg.family_size < 1) fail("family.size must be at least 1");
}

}  // namespace kdv5
