#include "kdv5/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kdv5 {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::Gaussian: return "gaussian";
    case DataKind::Sech2: return "sech2";
    case DataKind::RandomSchwartz: return "random";
  }
  return "unknown";
}

DataKind data_kind_from_string(const std::string& name) {
  if (name == "gaussian") return DataKind::Gaussian;
  if (name == "sech2") return DataKind::Sech2;
  if (name == "random" || name == "seeded-random-schwartz") return DataKind::RandomSchwartz;
  throw std::invalid_argument("unknown data family '" + name + "'");
}

RealField gaussian(const Grid& g, double amplitude, double width, double center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
  return RealField::from_function(g, [=](double x) {
    const double z = (x - center) / width;
    return amplitude * std::exp(-z * z);
  });
}

RealField sech2(const Grid& g, double amplitude, double width, double center) {
  if (!(width > 0.0)) throw std::invalid_argument("sech2: width must be positive");
  return RealField::from_function(g, [=](double x) {
    const double c = 1.0 / std::cosh((x - center) / width);
    return amplitude * c * c;
  });
}

RealField random_schwartz(const Grid& g, Rng& rng, double amplitude, double width, double center, double band) {
  constexpr int kModes = 8;
  double freq[kModes], amp[kModes], phase[kModes];
  for (int m = 0; m < kModes; ++m) {
    freq[m] = rng.uniform(0.0, band);
    amp[m] = rng.normal();
    phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  const double envelope = rng.uniform(0.5 * width, width);
  RealField f = RealField::from_function(g, [&](double x) {
    const double y = x - center;
    double s = 0.0;
    for (int m = 0; m < kModes; ++m) s += amp[m] * std::cos(freq[m] * y + phase[m]);
    const double z = y / envelope;
    return s * std::exp(-z * z);
  });
  const double norm = l2_norm(f);
  if (norm > 0.0) f *= amplitude / norm;
  return f;
}

RealField make_initial_data(const Grid& g, const DataSpec& spec) {
  switch (spec.kind) {
    case DataKind::Gaussian: return gaussian(g, spec.amplitude, spec.width, spec.center);
    case DataKind::Sech2: return sech2(g, spec.amplitude, spec.width, spec.center);
    case DataKind::RandomSchwartz: {
      Rng rng(spec.seed);
      return random_schwartz(g, rng, spec.amplitude, spec.width, spec.center, spec.band);
    }
  }
  throw std::invalid_argument("make_initial_data: unknown family");
}

std::vector<RealField> random_family(const Grid& g, std::uint64_t seed, std::size_t count, double width, double band,
                                     double center_spread) {
  Rng rng(seed);
  std::vector<RealField> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double center = rng.uniform(-center_spread, center_spread);
    out.push_back(random_schwartz(g, rng, 1.0, width, center, band));
  }
  return out;
}

}  // namespace kdv5
