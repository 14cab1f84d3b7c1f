#pragma once

// Truncated Taylor series in one variable. A Jet stores c_k = f^(k)(x0)/k!
// for k = 0..kOrder, and arithmetic propagates them exactly (up to rounding),
// which is how the weight module gets closed-form derivatives without
// writing them out by hand.

#include <array>
#include <cmath>
#include <cstddef>

namespace kdv5 {

inline constexpr int kJetOrder = 5;

class Jet {
 public:
  static constexpr std::size_t kSize = kJetOrder + 1;

  constexpr Jet() : c_{} {}
  constexpr explicit Jet(double value) : c_{} { c_[0] = value; }

  // The independent variable at x0.
  static Jet variable(double x0, double slope = 1.0) {
    Jet j(x0);
    j.c_[1] = slope;
    return j;
  }

  double value() const { return c_[0]; }
  double coefficient(std::size_t k) const { return c_[k]; }
  double& coefficient(std::size_t k) { return c_[k]; }

  // k-th derivative, k <= kJetOrder.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c_[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k < kSize; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k < kSize; ++k) {
      double s = a.c_[k];
      for (std::size_t i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }

  friend Jet operator/(double s, const Jet& b) { return Jet(s) / b; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  // exp via f' = f * a'.
  friend Jet exp(const Jet& a) {
    Jet r;
    r.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * a.c_[i] * r.c_[k - i];
      r.c_[k] = s / static_cast<double>(k);
    }
    return r;
  }

  // a^p for a(x0) > 0, via a * f' = p * f * a'.
  friend Jet pow(const Jet& a, double p) {
    Jet r;
    r.c_[0] = std::pow(a.c_[0], p);
    for (std::size_t k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) {
        const double di = static_cast<double>(i);
        s += (p * di - static_cast<double>(k - i)) * a.c_[i] * r.c_[k - i];
      }
      r.c_[k] = s / (static_cast<double>(k) * a.c_[0]);
    }
    return r;
  }

  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

 private:
  std::array<double, kSize> c_;
};

}  // namespace kdv5
