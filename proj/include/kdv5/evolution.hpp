#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kdv5/spectral.hpp"

namespace kdv5 {

enum class Scheme { Picard, Etdrk4, Free };

std::string to_string(Scheme s);

struct Trajectory {
  std::vector<double> times;
  std::vector<RealField> fields;

  int k = 1;
  Scheme scheme = Scheme::Etdrk4;
  double dt = 0.0;
  bool dealias = true;
  bool nonlinear = true;
  // Picard bookkeeping; zero for other schemes.
  int iterations = 0;
  double last_update = 0.0;

  const Grid& grid() const { return fields.front().grid(); }
  std::size_t size() const { return fields.size(); }
  bool empty() const { return fields.empty(); }
  double final_time() const { return times.back(); }
  const RealField& initial() const { return fields.front(); }
  const RealField& final() const { return fields.back(); }
};

// u^k d/dx u must have k in {1, 2}.
void check_power(int k);

// -u^k u_x, pseudospectrally; with dealias the input spectrum is cut to
// |xi_k| <= xi_{n/3} before the products and the result is cut the same way.
RealField nonlinear_term(const RealField& f, int k, bool dealias = true);
Spectrum nonlinear_term(const Spectrum& s, int k, bool dealias = true);

// Highest retained half-spectrum index under the 2/3 rule.
std::size_t dealias_cutoff(const Grid& g);

struct EvolutionOptions {
  bool nonlinear = true;
  bool dealias = true;
  double blowup_threshold = 1e8;
  // Keep every m-th step (the final time is always kept).
  std::size_t store_every = 1;
};

// Cox-Matthews ETDRK4 with the dispersive part treated exactly by the free
// group multiplier. T/dt must be an integer to within rounding.
Trajectory integrate(const RealField& u0, double T, double dt, int k, const EvolutionOptions& opts = {});

// Free evolution sampled at uniform times, t_i = i*T/nt.
Trajectory free_trajectory(const RealField& u0, double T, std::size_t nt);

struct PicardOptions {
  bool nonlinear = true;
  bool dealias = true;
  double blowup_threshold = 1e8;
};

// Global-in-time fixed point of the Duhamel map on the uniform time grid
// t_i = i*T/nt, until sup_i ||u^(m+1)(t_i) - u^(m)(t_i)||_L2 < tol.
// Throws NoContraction after max_iter sweeps, BlowUp on non-finite data.
Trajectory picard_solve(const RealField& u0, double T, std::size_t nt, int k, double tol, int max_iter,
                        const PicardOptions& opts = {});

// picard_solve, halving T after each NoContraction until it converges or
// T drops below min_T (then rethrows). Returns the trajectory; its final time
// is the T actually reached.
Trajectory picard_solve_halving(const RealField& u0, double T, std::size_t nt, int k, double tol, int max_iter,
                                double min_T, const PicardOptions& opts = {});

// sup_i || u(t_i) - [W(t_i) u0 + int_0^{t_i} W(t_i - s) N(u(s)) ds] ||_L2 with
// the same quadrature as picard_solve. Requires uniform times.
double duhamel_residual(const Trajectory& traj, int k, bool nonlinear = true);

// One step of the cumulative quadrature used for Duhamel integrals on a
// uniform grid: Q_i = Q_base + sum_j w_j g_j. `last` is the final index
// available (needed for the first interval's end correction).
struct QuadratureStep {
  std::size_t base;
  std::vector<std::pair<std::size_t, double>> terms;
};
QuadratureStep cumulative_simpson_step(std::size_t i, std::size_t last, double h);

// Scalar convenience over the above, mainly for testing.
std::vector<double> cumulative_simpson(const std::vector<double>& values, double h);

}  // namespace kdv5
