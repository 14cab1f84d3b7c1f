#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kdv5/jet.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

enum class WeightKind { Smooth, Truncated, Odd, OddTilde };

std::string to_string(WeightKind kind);

// Smooth C^inf step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
Jet smooth_step(const Jet& s);

// <x>^(2r), untruncated.
Jet smooth_weight_jet(double x, double r);

// w_N: <x> for |x| <= N, 2N for |x| >= sqrt(3) N, blended in between.
// Requires N >= 1 so that <x> <= 2N across the blend.
Jet truncated_weight_jet(double x, double N);

// Odd extension of phi_{N,alpha} (tilde = false: exponent alpha + 1/2) or
// of phi~_{N,alpha} (tilde = true: exponent alpha). Profile
// (1+x^2)^beta - 1 on [0, N], plateau (2N^2)^beta from 10N on.
// At x = 0 the even-order derivatives are reported as 0 (the odd extension
// is only C^1 there).
Jet odd_weight_jet(double x, double N, double alpha, bool tilde);

// Samples of d^j/dx^j on the grid, j <= 5.
std::vector<double> smooth_weight(const Grid& g, double r, int j);
// Throws DomainTooSmall unless 3N < 0.9 L.
std::vector<double> truncated_weight(const Grid& g, double N, int j);
// Throws DomainTooSmall unless 10N < 0.9 L.
std::vector<double> odd_weight(const Grid& g, double N, double alpha, bool tilde, int j);

// A weight sampled together with its derivatives 0..5.
struct WeightFamily {
  WeightKind kind;
  double r = 0.0;      // Smooth: exponent of <x>^(2r)
  double N = 0.0;      // Truncated / Odd / OddTilde
  double alpha = 0.0;  // Odd / OddTilde
  Grid grid;
  std::array<std::vector<double>, kJetOrder + 1> derivatives;

  const std::vector<double>& values() const { return derivatives[0]; }
};

WeightFamily sample_smooth(const Grid& g, double r);
WeightFamily sample_truncated(const Grid& g, double N);
WeightFamily sample_odd(const Grid& g, double N, double alpha, bool tilde);

// N used when a computation asks for the "smooth" weight on a periodic box:
// 3N = 0.8 L.
double default_truncation(const Grid& g);

// Weight selector used by the diagnostics: nullopt means the default
// truncation of the grid.
struct WeightChoice {
  std::optional<double> N;

  static WeightChoice smooth() { return {}; }
  static WeightChoice truncated(double n) { return {n}; }
  double resolve(const Grid& g) const { return N ? *N : default_truncation(g); }
};

// Samples of d^j/dx^j of w_N^q, j = 0..5.
std::array<std::vector<double>, kJetOrder + 1> truncated_weight_power(const Grid& g, double N, double q);

struct WeightBoundRow {
  double N;
  int j;
  double constant;  // max over the grid of the measured bound quantity
};

// Truncated: max |w_N^(j)| * w_N^(j-1). Odd / OddTilde: max |phi_N^(j)|.
// Throws std::invalid_argument for j = 0 or j > 5, or for kind Smooth.
std::vector<WeightBoundRow> verify_weight_bounds(const Grid& g, WeightKind kind, const std::vector<double>& Ns,
                                                 const std::vector<int>& js, double alpha = 0.125);

}  // namespace kdv5
