#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kdv5/spectral.hpp"

namespace kdv5 {

// Seeded generator whose draws are identical on every platform (the
// standard distributions are implementation-defined, so we map the raw
// mt19937_64 output ourselves).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class DataKind { Gaussian, Sech2, RandomSchwartz };

std::string to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& name);

struct DataSpec {
  DataKind kind = DataKind::Gaussian;
  double amplitude = 1.0;
  double width = 8.0;
  double center = 0.0;
  // RandomSchwartz only: highest wavenumber of the random modes.
  double band = 1.0;
  std::uint64_t seed = 0;
};

// a * exp(-(x - c)^2 / width^2)
RealField gaussian(const Grid& g, double amplitude, double width, double center);
// a * sech^2((x - c) / width)
RealField sech2(const Grid& g, double amplitude, double width, double center);
// Random band-limited trigonometric sum under a Gaussian envelope, scaled to
// L2 norm `amplitude`. The envelope width is drawn from [width/2, width].
RealField random_schwartz(const Grid& g, Rng& rng, double amplitude, double width, double center, double band);

RealField make_initial_data(const Grid& g, const DataSpec& spec);

// `count` independent random_schwartz draws from one seed; centers are
// drawn from [-center_spread, center_spread].
std::vector<RealField> random_family(const Grid& g, std::uint64_t seed, std::size_t count, double width = 6.0,
                                     double band = 1.0, double center_spread = 5.0);

}  // namespace kdv5
