#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "helpers.hpp"
#include "kdv5/errors.hpp"
#include "kdv5/weights.hpp"

using namespace kdv5;
using testing::kBox;

namespace {

const std::vector<double> kNs = {4.0, 8.0, 16.0};
constexpr double kAlpha = 0.125;
// The odd weights plateau only at 10N, so N = 16 needs a wider box.
constexpr double kWideBox = 64.0 * std::numbers::pi;

// Max |f_j' - (f_{j-1}(x+dx) - f_{j-1}(x-dx)) / 2dx| over interior points
// with |x| >= skip.
double fd_error(const Grid& g, const std::function<std::vector<double>(const Grid&, int)>& sample, int j,
                double skip) {
  const auto lower = sample(g, j - 1);
  const auto upper = sample(g, j);
  double err = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    if (std::abs(g.x(i)) < skip) continue;
    const double fd = (lower[i + 1] - lower[i - 1]) / (2.0 * g.dx());
    err = std::max(err, std::abs(fd - upper[i]));
  }
  return err;
}

double fd_order(const std::function<std::vector<double>(const Grid&, int)>& sample, int j, double skip) {
  // The blends are a few dx wide below n = 8192 and not yet asymptotic.
  const double coarse = fd_error(Grid(kBox, 8192), sample, j, skip);
  const double fine = fd_error(Grid(kBox, 16384), sample, j, skip);
  return std::log2(coarse / fine);
}

}  // namespace

TEST_CASE("jet arithmetic matches closed forms") {
  const double x = 0.7;
  const Jet X = Jet::variable(x);
  const Jet e = exp(X * X);
  // d/dx exp(x^2) = 2x exp(x^2), second derivative (2 + 4x^2) exp(x^2).
  CHECK(e.derivative(1) == doctest::Approx(2 * x * std::exp(x * x)).epsilon(1e-14));
  CHECK(e.derivative(2) == doctest::Approx((2 + 4 * x * x) * std::exp(x * x)).epsilon(1e-14));
  const Jet q = 1.0 / (1.0 + X);
  // d^5/dx^5 (1+x)^-1 = -120 (1+x)^-6.
  CHECK(q.derivative(5) == doctest::Approx(-120.0 * std::pow(1 + x, -6)).epsilon(1e-13));
  const Jet p = pow(X, 3.0);
  CHECK(p.derivative(3) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(std::abs(p.derivative(4)) < 1e-12);
  CHECK(sqrt(X * X).derivative(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("smooth_step is 0, 1 and monotone") {
  CHECK(smooth_step(Jet(-0.5)).value() == 0.0);
  CHECK(smooth_step(Jet(0.0)).value() == 0.0);
  CHECK(smooth_step(Jet(1.0)).value() == 1.0);
  CHECK(smooth_step(Jet(0.5)).value() == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double v = smooth_step(Jet::variable(i / 200.0)).value();
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("smooth weight examples") {
  CHECK(smooth_weight_jet(0.0, 0.5).value() == 1.0);
  CHECK(smooth_weight_jet(std::sqrt(3.0), 0.5).value() == doctest::Approx(2.0).epsilon(1e-15));
  for (double x : {-3.0, -0.2, 0.0, 1.5, 40.0}) {
    const Jet w = smooth_weight_jet(x, 1.0);
    CHECK(w.value() == doctest::Approx(1 + x * x).epsilon(1e-15));
    CHECK(w.derivative(1) == doctest::Approx(2 * x).epsilon(1e-14));
    CHECK(w.derivative(2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(w.derivative(3)) < 1e-12);
  }
  const Grid g(kBox, 256);
  const auto d1 = smooth_weight(g, 1.0, 1);
  for (std::size_t i = 0; i < g.size(); i += 17) CHECK(d1[i] == doctest::Approx(2 * g.x(i)).epsilon(1e-13));
  CHECK_THROWS_AS(smooth_weight(g, 1.0, 6), std::invalid_argument);
}

TEST_CASE("truncated weight plateau values") {
  for (double N : kNs) {
    CHECK(truncated_weight_jet(0.0, N).value() == 1.0);
    CHECK(truncated_weight_jet(4 * N, N).value() == 2 * N);
    CHECK(truncated_weight_jet(-4 * N, N).value() == 2 * N);
    CHECK(truncated_weight_jet(3 * N, N).value() == 2 * N);
    for (int j = 1; j <= 5; ++j) CHECK(truncated_weight_jet(3.5 * N, N).derivative(static_cast<std::size_t>(j)) == 0.0);
  }
}

TEST_CASE("truncated weight invariants on the grid") {
  const Grid g(kBox, 2048);
  for (double N : kNs) {
    const WeightFamily w = sample_truncated(g, N);
    const auto& v = w.values();
    const auto smooth = smooth_weight(g, 0.5, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double ax = std::abs(g.x(i));
      if (ax <= N) CHECK(v[i] == smooth[i]);
      if (ax >= 3 * N) CHECK(v[i] == 2 * N);
      CHECK(v[i] >= 1.0);
      CHECK(v[i] <= 2 * N);
    }
    // Non-decreasing in |x|: walk outward from the center on both sides.
    const std::size_t mid = g.size() / 2;
    for (std::size_t i = mid; i + 1 < g.size(); ++i) CHECK(v[i + 1] >= v[i]);
    for (std::size_t i = mid; i > 0; --i) CHECK(v[i - 1] >= v[i]);
  }
}

TEST_CASE("truncated weight bound constants are N-independent") {
  const Grid g(kBox, 2048);
  const auto rows = verify_weight_bounds(g, WeightKind::Truncated, kNs, {1, 2, 3, 4, 5});
  REQUIRE(rows.size() == 15);
  for (int j = 1; j <= 5; ++j) {
    double lo = INFINITY;
    double hi = 0.0;
    for (const auto& row : rows) {
      if (row.j != j) continue;
      CHECK(std::isfinite(row.constant));
      lo = std::min(lo, row.constant);
      hi = std::max(hi, row.constant);
    }
    CHECK(lo > 0.0);
    CHECK(hi <= 2.0 * lo);
  }
  // j = 1 includes the region |x| <= N where |<x>'| approaches 1.
  for (const auto& row : rows) {
    if (row.j == 1) CHECK(row.constant >= 0.9);
  }
}

TEST_CASE("weight bound preconditions") {
  const Grid g(kBox, 1024);
  CHECK_THROWS_AS(verify_weight_bounds(g, WeightKind::Truncated, {4.0}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(verify_weight_bounds(g, WeightKind::Truncated, {4.0}, {6}), std::invalid_argument);
  CHECK_THROWS_AS(verify_weight_bounds(g, WeightKind::Smooth, {4.0}, {1}), std::invalid_argument);
  // 3N must stay below 0.9 L: L = 32 pi gives N < 30.15.
  CHECK_THROWS_AS(truncated_weight(g, 31.0, 0), DomainTooSmall);
  CHECK_NOTHROW(truncated_weight(g, 30.0, 0));
  CHECK_THROWS_AS(odd_weight(g, 10.0, kAlpha, false, 0), DomainTooSmall);
  CHECK_NOTHROW(odd_weight(g, 9.0, kAlpha, false, 0));
  CHECK_THROWS_AS(odd_weight(g, 0.5, kAlpha, false, 0), std::invalid_argument);
  CHECK_THROWS_AS(truncated_weight(g, 0.5, 0), std::invalid_argument);
}

TEST_CASE("odd weight examples") {
  for (double N : kNs) {
    for (bool tilde : {false, true}) {
      const double beta = tilde ? kAlpha : kAlpha + 0.5;
      CHECK(odd_weight_jet(0.0, N, kAlpha, tilde).value() == 0.0);
      CHECK(odd_weight_jet(11 * N, N, kAlpha, tilde).value() == doctest::Approx(std::pow(2 * N * N, beta)).epsilon(1e-15));
      CHECK(odd_weight_jet(-11 * N, N, kAlpha, tilde).value() ==
            doctest::Approx(-std::pow(2 * N * N, beta)).epsilon(1e-15));
      const double x = 0.6 * N;
      CHECK(odd_weight_jet(x, N, kAlpha, tilde).value() ==
            doctest::Approx(std::pow(1 + x * x, beta) - 1).epsilon(1e-14));
    }
  }
}

TEST_CASE("odd weight invariants on the grid") {
  const Grid g(kWideBox, 4096);
  for (double N : kNs) {
    for (bool tilde : {false, true}) {
      const double beta = tilde ? kAlpha : kAlpha + 0.5;
      const double plateau = std::pow(2 * N * N, beta);
      const WeightFamily w = sample_odd(g, N, kAlpha, tilde);
      const auto& v = w.values();
      for (std::size_t i = 1; i < g.size(); ++i) {
        // Grid index j mirrors to n - j.
        CHECK(v[g.size() - i] == -v[i]);
        CHECK(w.derivatives[1][i] >= 0.0);
        const double x = g.x(i);
        if (x >= 10 * N) CHECK(v[i] == plateau);
        if (x >= 0.0 && x <= N) CHECK(v[i] == doctest::Approx(std::pow(1 + x * x, beta) - 1).epsilon(1e-14));
      }
      CHECK(v[g.size() / 2] == 0.0);
    }
  }
}

TEST_CASE("odd weight derivative bounds are N-independent") {
  const Grid g(kWideBox, 4096);
  for (bool tilde : {false, true}) {
    const auto kind = tilde ? WeightKind::OddTilde : WeightKind::Odd;
    const int first = tilde ? 1 : 2;
    std::vector<int> js;
    for (int j = first; j <= 5; ++j) js.push_back(j);
    const auto rows = verify_weight_bounds(g, kind, kNs, js, kAlpha);
    for (int j : js) {
      double lo = INFINITY;
      double hi = 0.0;
      for (const auto& row : rows) {
        if (row.j != j) continue;
        CHECK(std::isfinite(row.constant));
        lo = std::min(lo, row.constant);
        hi = std::max(hi, row.constant);
      }
      CHECK(hi <= 2.0 * lo);
    }
  }
}

TEST_CASE("analytic derivatives match centered differences at second order") {
  SUBCASE("smooth") {
    auto s = [](const Grid& g, int j) { return smooth_weight(g, 0.5, j); };
    for (int j = 1; j <= 5; ++j) CHECK(fd_order(s, j, 0.0) >= 1.8);
  }
  SUBCASE("truncated") {
    for (double N : kNs) {
      auto s = [N](const Grid& g, int j) { return truncated_weight(g, N, j); };
      for (int j = 1; j <= 5; ++j) CHECK(fd_order(s, j, 0.0) >= 1.8);
    }
  }
  SUBCASE("odd") {
    for (bool tilde : {false, true}) {
      auto s = [tilde](const Grid& g, int j) { return odd_weight(g, 4.0, kAlpha, tilde, j); };
      // The odd extension is only C^1 at the origin.
      for (int j = 1; j <= 5; ++j) CHECK(fd_order(s, j, 1.0) >= 1.8);
    }
  }
}

TEST_CASE("truncated weight powers") {
  const Grid g(kBox, 512);
  const auto p = truncated_weight_power(g, 8.0, 1.0);
  const auto w = sample_truncated(g, 8.0);
  for (std::size_t k = 0; k <= kJetOrder; ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(p[k][i] == doctest::Approx(w.derivatives[k][i]).epsilon(1e-12).scale(1.0));
  }
  const auto sq = truncated_weight_power(g, 8.0, 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(sq[0][i] == doctest::Approx(w.values()[i] * w.values()[i]).epsilon(1e-13));
}

TEST_CASE("default truncation fills 80 percent of the box") {
  const Grid g(kBox, 1024);
  CHECK(3 * default_truncation(g) == doctest::Approx(0.8 * kBox).epsilon(1e-15));
  CHECK(WeightChoice::smooth().resolve(g) == default_truncation(g));
  CHECK(WeightChoice::truncated(4.0).resolve(g) == 4.0);
}
