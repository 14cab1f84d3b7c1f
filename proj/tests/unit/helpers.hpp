#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "kdv5/families.hpp"
#include "kdv5/spectral.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kBox = 32.0 * std::numbers::pi;

// White-noise samples, unit variance. Not band-limited.
inline kdv5::RealField noise_field(const kdv5::Grid& g, std::uint64_t seed) {
  kdv5::Rng rng(seed);
  auto f = kdv5::RealField::zeros(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = rng.normal();
  return f;
}

inline double max_diff(const kdv5::RealField& a, const kdv5::RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace testing
