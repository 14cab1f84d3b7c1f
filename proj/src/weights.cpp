#include "kdv5/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kdv5/errors.hpp"

namespace kdv5 {

namespace {

// Below this the step and all its derivatives are under exp(-500).
constexpr double kStepEdge = 2e-3;

void check_order(int j) {
  if (j < 0 || j > kJetOrder) throw std::invalid_argument("weight derivative order must be in [0, 5]");
}

void check_truncation(const Grid& g, double N, double reach, const char* what) {
  if (!(N >= 1.0)) throw std::invalid_argument(std::string(what) + ": N must be >= 1");
  if (!(reach * N < 0.9 * g.half_width())) {
    throw DomainTooSmall(std::string(what) + ": support " + std::to_string(reach * N) +
                         " does not fit inside 0.9 L = " + std::to_string(0.9 * g.half_width()));
  }
}

// |x| as a jet in x; the slope at 0 is taken from the right.
Jet abs_variable(double x) { return Jet::variable(std::abs(x), x < 0.0 ? -1.0 : 1.0); }

Jet blend(const Jet& inner, double plateau, const Jet& y, double start, double end) {
  const Jet s = (y - start) / (end - start);
  const Jet sigma = smooth_step(s);
  return (1.0 - sigma) * inner + sigma * plateau;
}

// exp(-kappa/s) / (exp(-kappa/s) + exp(-kappa/(1-s))), clamped to 0 and 1
// near the ends.
Jet step(const Jet& s, double kappa) {
  const double v = s.value();
  if (v <= kStepEdge) return Jet(0.0);
  if (v >= 1.0 - kStepEdge) return Jet(1.0);
  const Jet a = exp(-kappa / s);
  const Jet b = exp(-kappa / (1.0 - s));
  return a / (a + b);
}

// Sharpness of the step inside the clamp; 1.3 keeps the order 4 and 5
// derivatives of phi at N = 4 within those at the origin.
constexpr double kRampKappa = 1.3;

// int_0^a step(t, kRampKappa) dt for a <= 1/2.
double step_integral(double a) {
  if (a <= kStepEdge) return 0.0;
  auto f = [](double t) {
    const double a = std::exp(-kRampKappa / t);
    return a / (a + std::exp(-kRampKappa / (1.0 - t)));
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, kStepEdge, a, 10, 1e-13);
}

// G(s) = int_0^s (1 - step): slope 1 at 0, flat (= 1/2) from 1 on.
// Uses step(1 - t) = 1 - step(t) to keep the tail exact.
Jet ramp(const Jet& s) {
  const double v = s.value();
  if (v <= 0.0) return s;
  if (v >= 1.0) return Jet(0.5);
  // G' = (1 - step(s)) s', integrated term by term.
  Jet ds;
  for (std::size_t k = 0; k < kJetOrder; ++k) ds.coefficient(k) = static_cast<double>(k + 1) * s.coefficient(k + 1);
  const Jet slope = (1.0 - step(s, kRampKappa)) * ds;
  Jet g;
  g.coefficient(0) = v <= 0.5 ? v - step_integral(v) : 0.5 - step_integral(1.0 - v);
  for (std::size_t k = 1; k <= kJetOrder; ++k) g.coefficient(k) = slope.coefficient(k - 1) / static_cast<double>(k);
  return g;
}

// (1 + c^2)^beta - m, where c clamps y smoothly at cmax and m steps down
// from 1 to m_inf on [N, 10N]. Both pieces are monotone. cmax is taken as
// large as the plateau allows (m_inf = 0 ... 1) so c bends over the longest
// stretch available, capped so the bend ends by 9N.
Jet odd_profile(const Jet& y, double N, double beta) {
  const double plateau = std::pow(2.0 * N * N, beta);
  const double yv = y.value();
  if (yv >= 10.0 * N) return Jet(plateau);
  if (yv <= N) return pow(1.0 + y * y, beta) - 1.0;
  const double cmax = std::min(std::sqrt(std::pow(plateau + 1.0, 1.0 / beta) - 1.0), 5.0 * N);
  const double m_inf = std::min(std::pow(1.0 + cmax * cmax, beta) - plateau, 1.0);
  const double width = 2.0 * (cmax - N);
  const Jet c = N + width * ramp((y - N) / width);
  const Jet m = 1.0 - (1.0 - m_inf) * smooth_step((y - N) / (9.0 * N));
  return pow(1.0 + c * c, beta) - m;
}

// Grid point i, or with `mirror` the exact negative of its partner n - i, so
// that odd and even weights are exactly symmetric on the grid.
double point(const Grid& g, std::size_t i, bool mirror) {
  if (mirror && i > 0 && 2 * i < g.size()) return -g.x(g.size() - i);
  return g.x(i);
}

template <typename JetFn>
std::vector<double> sample(const Grid& g, int j, JetFn&& fn, bool mirror = false) {
  check_order(j);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(point(g, i, mirror)).derivative(static_cast<std::size_t>(j));
  return out;
}

template <typename JetFn>
std::array<std::vector<double>, kJetOrder + 1> sample_all(const Grid& g, JetFn&& fn, bool mirror = false) {
  std::array<std::vector<double>, kJetOrder + 1> out;
  for (auto& v : out) v.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Jet w = fn(point(g, i, mirror));
    for (std::size_t k = 0; k <= kJetOrder; ++k) out[k][i] = w.derivative(k);
  }
  return out;
}

}  // namespace

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Smooth: return "smooth";
    case WeightKind::Truncated: return "truncated";
    case WeightKind::Odd: return "odd";
    case WeightKind::OddTilde: return "odd_tilde";
  }
  return "unknown";
}

Jet smooth_step(const Jet& s) { return step(s, 1.0); }

Jet smooth_weight_jet(double x, double r) {
  const Jet X = Jet::variable(x);
  return pow(1.0 + X * X, r);
}

Jet truncated_weight_jet(double x, double N) {
  const Jet y = abs_variable(x);
  const double plateau = 2.0 * N;
  const double end = std::sqrt(3.0) * N;
  const double yv = y.value();
  if (yv >= end) return Jet(plateau);
  const Jet bracket = sqrt(1.0 + y * y);
  if (yv <= N) return bracket;
  return blend(bracket, plateau, y, N, end);
}

Jet odd_weight_jet(double x, double N, double alpha, bool tilde) {
  const double beta = tilde ? alpha : alpha + 0.5;
  const Jet y = abs_variable(x);
  Jet phi = odd_profile(y, N, beta);
  if (x < 0.0) return -phi;
  if (x == 0.0) {
    for (std::size_t k = 0; k <= kJetOrder; k += 2) phi.coefficient(k) = 0.0;
  }
  return phi;
}

std::vector<double> smooth_weight(const Grid& g, double r, int j) {
  return sample(g, j, [r](double x) { return smooth_weight_jet(x, r); });
}

std::vector<double> truncated_weight(const Grid& g, double N, int j) {
  check_truncation(g, N, 3.0, "truncated_weight");
  return sample(g, j, [N](double x) { return truncated_weight_jet(x, N); });
}

std::vector<double> odd_weight(const Grid& g, double N, double alpha, bool tilde, int j) {
  check_truncation(g, N, 10.0, "odd_weight");
  return sample(g, j, [=](double x) { return odd_weight_jet(x, N, alpha, tilde); }, true);
}

WeightFamily sample_smooth(const Grid& g, double r) {
  WeightFamily w{WeightKind::Smooth, r, 0.0, 0.0, g, {}};
  w.derivatives = sample_all(g, [r](double x) { return smooth_weight_jet(x, r); });
  return w;
}

WeightFamily sample_truncated(const Grid& g, double N) {
  check_truncation(g, N, 3.0, "truncated_weight");
  WeightFamily w{WeightKind::Truncated, 0.0, N, 0.0, g, {}};
  w.derivatives = sample_all(g, [N](double x) { return truncated_weight_jet(x, N); });
  return w;
}

WeightFamily sample_odd(const Grid& g, double N, double alpha, bool tilde) {
  check_truncation(g, N, 10.0, "odd_weight");
  WeightFamily w{tilde ? WeightKind::OddTilde : WeightKind::Odd, 0.0, N, alpha, g, {}};
  w.derivatives = sample_all(g, [=](double x) { return odd_weight_jet(x, N, alpha, tilde); }, true);
  return w;
}

double default_truncation(const Grid& g) { return 0.8 * g.half_width() / 3.0; }

std::array<std::vector<double>, kJetOrder + 1> truncated_weight_power(const Grid& g, double N, double q) {
  check_truncation(g, N, 3.0, "truncated_weight");
  return sample_all(g, [N, q](double x) { return pow(truncated_weight_jet(x, N), q); });
}

std::vector<WeightBoundRow> verify_weight_bounds(const Grid& g, WeightKind kind, const std::vector<double>& Ns,
                                                 const std::vector<int>& js, double alpha) {
  if (kind == WeightKind::Smooth) throw std::invalid_argument("bounds are defined for truncated and odd weights");
  for (int j : js) {
    if (j < 1 || j > kJetOrder) throw std::invalid_argument("bound order must be in [1, 5]");
  }
  std::vector<WeightBoundRow> rows;
  for (double N : Ns) {
    const WeightFamily w = kind == WeightKind::Truncated ? sample_truncated(g, N)
                                                          : sample_odd(g, N, alpha, kind == WeightKind::OddTilde);
    for (int j : js) {
      const auto& d = w.derivatives[static_cast<std::size_t>(j)];
      double c = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        double q = std::abs(d[i]);
        if (kind == WeightKind::Truncated) q *= std::pow(w.values()[i], j - 1);
        c = std::max(c, q);
      }
      rows.push_back({N, j, c});
    }
  }
  return rows;
}

}  // namespace kdv5
