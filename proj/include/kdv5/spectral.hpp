#pragma once

// Periodic grid on [-L, L), real fields, their Fourier coefficients and the
// Fourier-multiplier operators used throughout the solver.
//
// Transform normalization: for x_j = -L + j*dx and xi_k = pi*k/L,
//
//   u_hat(k) = (1/n) * sum_j u_j * exp(-i*xi_k*x_j),
//   u_j      = sum_k u_hat(k) * exp(i*xi_k*x_j),
//
// so u_hat are the Fourier-series coefficients of the box and the discrete
// Plancherel identity reads  dx * sum_j u_j^2 = 2L * sum_k |u_hat(k)|^2.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace kdv5 {

using Complex = std::complex<double>;

class Grid {
 public:
  // Throws std::invalid_argument unless L > 0, n even and n >= 8.
  Grid(double half_width, std::size_t n);

  double half_width() const { return impl_->half_width; }
  std::size_t size() const { return impl_->n; }
  double dx() const { return impl_->dx; }
  double length() const { return 2.0 * impl_->half_width; }
  double x(std::size_t j) const { return -impl_->half_width + static_cast<double>(j) * impl_->dx; }
  std::vector<double> points() const;

  // Half-spectrum layout: index m in [0, n/2] holds wavenumber xi = pi*m/L;
  // m = n/2 is the Nyquist mode (whose signed wavenumber is -pi*n/(2L)).
  std::size_t spectrum_size() const { return impl_->n / 2 + 1; }
  double wavenumber(std::size_t m) const { return impl_->dxi * static_cast<double>(m); }
  double wavenumber_spacing() const { return impl_->dxi; }
  bool is_nyquist(std::size_t m) const { return m == impl_->n / 2; }

  // Signed wavenumbers in natural order, k = -n/2 .. n/2-1.
  std::vector<double> signed_wavenumbers() const;

  bool operator==(const Grid& other) const {
    return impl_ == other.impl_ ||
           (impl_->n == other.impl_->n && impl_->half_width == other.impl_->half_width);
  }

  // Raw transforms in the normalization documented above. `spec` has
  // spectrum_size() entries. Safe to call concurrently.
  void forward(std::span<const double> samples, std::span<Complex> spec) const;
  void inverse(std::span<const Complex> spec, std::span<double> samples) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;

  struct Impl {
    double half_width;
    std::size_t n;
    double dx;
    double dxi;
    void* forward_plan;
    void* inverse_plan;
    ~Impl();
  };
};

Grid make_grid(double half_width, std::size_t n);

class RealField {
 public:
  RealField(Grid grid, std::vector<double> samples);
  static RealField zeros(const Grid& grid);
  static RealField from_function(const Grid& grid, const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }
  double& operator[](std::size_t j) { return samples_[j]; }
  double max_abs() const;
  bool all_finite() const;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double c);

 private:
  Grid grid_;
  std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double c, RealField a);
// Pointwise product.
RealField hadamard(const RealField& a, const RealField& b);

// Fourier coefficients of a real field; Hermitian symmetry is implicit in the
// half-spectrum storage.
class Spectrum {
 public:
  Spectrum(Grid grid, std::vector<Complex> half);
  static Spectrum zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> half() const { return half_; }
  std::span<Complex> half() { return half_; }

  // Coefficient for signed index k in [-n/2, n/2-1].
  Complex coefficient(long k) const;

  // 2L * sum_k |u_hat(k)|^2 over the full spectrum.
  double energy() const;

 private:
  Grid grid_;
  std::vector<Complex> half_;
};

// Throws std::invalid_argument on non-finite samples.
Spectrum to_spectrum(const RealField& f);
RealField from_spectrum(const Spectrum& s);

// Applies m(xi) to every coefficient. `symbol` receives the non-negative
// half-spectrum wavenumber and whether the mode is Nyquist; the Nyquist
// multiplier must be real for the output to stay real.
using Symbol = std::function<Complex(double xi, bool nyquist)>;
Spectrum apply_symbol(const Spectrum& s, const Symbol& symbol);
RealField apply_symbol(const RealField& f, const Symbol& symbol);

// (i xi)^j, j <= 8. The Nyquist mode is dropped for odd j.
Complex derivative_symbol(double xi, bool nyquist, int order);
// |xi|^s with |0|^s = 0 for s > 0.
double fractional_symbol(double xi, double s);
// (1 + xi^2)^(s/2).
double bessel_symbol(double xi, double s);
// exp(-i t xi^5); identity on the Nyquist mode, where d/dx^5 vanishes.
Complex free_group_symbol(double xi, bool nyquist, double t);

RealField derivative(const RealField& f, int order);
RealField fractional_derivative(const RealField& f, double s);
RealField bessel_potential(const RealField& f, double s);
RealField free_propagate(const RealField& f, double t);
Spectrum free_propagate(const Spectrum& s, double t);

// L^2 norm over the box via the spectral sum.
double l2_norm(const RealField& f);
double l2_norm(const Spectrum& s);

// Reflection x -> -x on the symmetric grid (index j -> n - j mod n).
RealField reflect(const RealField& f);

// max |u| over the outer 10% of the box, |x| >= 0.9 L.
double boundary_contamination(const RealField& f);

}  // namespace kdv5
