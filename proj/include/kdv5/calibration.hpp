#pragma once
// Frozen constants: ratio maxima over a seeded family ("locks") and the
// fitted constants of the fit-then-holdout protocol. Regenerated only by
// `kdv5 calibrate`.
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kdv5/diagnostics.hpp"
#include "kdv5/families.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

inline constexpr double kLockFactor = 1.05;
// Fitted constants are frozen at this multiple of the largest fit ratio.
inline constexpr double kFitSafety = 1.1;

struct Calibration {
  int version = 1;
  double L = 0.0;
  std::size_t n = 1024;
  std::uint64_t seed = 0;
  std::size_t draws = 100;

  // Locks: max ratio over the family.
  double interpolation = 0.0;  // a = 2, b = 1/2, theta = 1/2
  double leibniz_n1 = 0.0;     // b = 1/2
  double leibniz_n2 = 0.0;
  double pointwise = 0.0;      // r = 0.4, t in {0.25, 0.5, 1}
  double smoothing = 0.0;      // ||d_x^2 W(t) u0||_{L^inf_x L^2_T} / ||u0||, T = 1

  // Fits.
  double apriori_C = 0.0;   // k = 1
  double gronwall_B = 0.0;
  double gronwall_C = 1.0;  // held fixed
  double g5_C = 0.0;        // r = 1/2
};

std::filesystem::path default_calibration_path();
Calibration load_calibration(const std::filesystem::path& path);
// Atomic write (temporary file + rename).
void save_calibration(const Calibration& cal, const std::filesystem::path& path);

// Family maxima. The family is random_family(g, seed, draws).
double interpolation_lock(const Grid& g, std::uint64_t seed, std::size_t draws);
double leibniz_lock(const Grid& g, std::uint64_t seed, std::size_t draws, int n);
double pointwise_lock(const Grid& g, std::uint64_t seed, std::size_t draws);
double smoothing_ratio(const RealField& u0, double T, std::size_t nt);
double smoothing_lock(const Grid& g, std::uint64_t seed, std::size_t draws);

struct LockResult {
  std::string name;
  double measured = 0.0;
  double locked = 0.0;
  bool passed = false;
};

// measured within [locked / factor, locked * factor].
bool within_lock(double measured, double locked, double factor = kLockFactor);
std::vector<LockResult> check_locks(const Calibration& cal);

// k = 1 a priori family: ten Gaussians, even members fit, odd members hold out.
std::vector<DataSpec> apriori_family();
// sup_t ||u||_H2^2 / (h^2 + h^3 + h^4), h = ||u0||_H2.
double apriori_ratio(const Trajectory& traj);

// A + B t + int_0^t (A + B s) e^(C (t - s)) ds.
double gronwall_envelope(double A, double B, double C, double t);
// Data used to fit B and the disjoint holdout set.
DataSpec gronwall_fit_data();
std::vector<DataSpec> gronwall_holdout_data();
// ||u(t)||^2 in L^2(w_N^(2r) dx), one entry per snapshot.
std::vector<double> weighted_energy_series(const Trajectory& traj, double r, WeightChoice weight = {});

// (lambda_5(W(t)u0) - ||w^r u0||) / ((1 + T)(||u0|| + ||D^(4r) u0||)).
double g5_ratio(const RealField& u0, double r, double T, std::size_t nt);

// Ratios are relative to the frozen bound: <= 1 means the bound holds.
struct FitReport {
  double constant = 0.0;
  std::vector<double> fit_ratios;
  std::vector<double> holdout_ratios;
};

// Each fit freezes kFitSafety times the largest fit ratio.
FitReport fit_apriori(const Grid& g);
FitReport fit_gronwall(const Grid& g);
FitReport fit_g5(const Grid& g, std::uint64_t seed);

// Recomputes every lock and fit for the given grid and family.
Calibration calibrate(double L, std::size_t n, std::uint64_t seed, std::size_t draws);

}  // namespace kdv5
