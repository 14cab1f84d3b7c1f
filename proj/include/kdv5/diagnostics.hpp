#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "kdv5/evolution.hpp"
#include "kdv5/spectral.hpp"
#include "kdv5/weights.hpp"

namespace kdv5 {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

// ||J^s f||_L2, s >= -2.
double sobolev_norm(const RealField& f, double s);
double sobolev_norm(const Spectrum& f, double s);

// (int f^2 w^(2r) dx)^(1/2) by the trapezoid rule, w = w_N.
double weighted_l2_norm(const RealField& f, double r, WeightChoice weight = WeightChoice::smooth());

// Trapezoid integral over the periodic box.
double box_integral(const RealField& f);

struct ConservedQuantities {
  double I1 = 0.0;
  // k = 1: (1/6) int f^3 + (1/2) int f_xx^2
  // k = 2: (1/12) int f^4 + (1/2) int f_xx^2
  double I2 = 0.0;
};

ConservedQuantities conserved_quantities(const RealField& f, int k);

enum class Prefix { None, Dx, FractionalDx, Dx2, Dx4 };
enum class NormKind { Sobolev, Weighted, Mixed };

struct NormSpec {
  NormKind kind = NormKind::Mixed;
  // Sobolev: order s. FractionalDx prefix: the fractional order.
  double order = 0.0;
  // Weighted: exponent r and weight.
  double r = 0.0;
  WeightChoice weight{};
  // Mixed: space exponent p and time exponent q.
  double p = 2.0;
  double q = 2.0;
  Prefix prefix = Prefix::None;
  // When true the time norm is taken outermost (L^q_T L^p_x).
  bool time_outer = false;
  // (1 + T)^(-rho) prefactor when rho > 0.
  double rho = 0.0;
  std::string label;

  static NormSpec sobolev(double s, std::string label = {});
  static NormSpec weighted(double r, WeightChoice w, std::string label = {});
  static NormSpec mixed(double p, double q, Prefix prefix, double order = 0.0, std::string label = {});
};

// Trapezoid weights for possibly non-uniform sample times.
std::vector<double> trapezoid_weights(const std::vector<double>& times);

// Sobolev / Weighted kinds: max over the snapshots. Mixed: inner norm over
// the time samples (trapezoid, or max for q = inf), outer norm over grid
// points (dx-weighted sum, or max for p = inf); reversed when time_outer.
double mixed_spacetime_norm(const Trajectory& traj, const NormSpec& spec);

// Per-snapshot application of a prefix operator.
RealField apply_prefix(const RealField& f, Prefix prefix, double order);

struct LambdaNorms {
  std::vector<double> lambda;
  double Lambda = 0.0;
};

// k = 1: lambda_1..lambda_5 with s = 4r, rho > 3/4.
// k = 2: lambda_1..lambda_4 in Z_{2,1/2}; r and rho are unused.
std::vector<NormSpec> lambda_specs(double r, int k, double rho, WeightChoice weight = WeightChoice::smooth());
LambdaNorms lambda_norms(const Trajectory& traj, double r, int k, double rho,
                         WeightChoice weight = WeightChoice::smooth());

// Streaming version of lambda_norms over a growing trajectory prefix, used
// for time series output.
class LambdaAccumulator {
 public:
  LambdaAccumulator(const Grid& g, double r, int k, double rho, WeightChoice weight = WeightChoice::smooth());

  void push(double t, const RealField& u);
  // Norms over [0, t_last]; entries beyond the k-dependent count are NaN.
  std::array<double, 5> current() const;

 private:
  Grid grid_;
  double r_;
  int k_;
  double rho_;
  double weight_N_;
  std::size_t count_ = 0;
  double t_last_ = 0.0;
  double lambda1_ = 0.0;
  double lambda5_ = 0.0;
  double time_outer_sum_ = 0.0;   // k = 1 lambda_2: sum of trapezoid terms
  double prev_time_outer_ = 0.0;  // previous |d_x u|_inf^4
  std::vector<double> sq_sum_;    // per-x trapezoid sums of |prefix u|^2
  std::vector<double> prev_sq_;
  std::vector<double> running_max_;  // per-x max |u|
};

struct RatioRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0); }
};

// lhs = ||J^(theta a)(w^((1-theta) b) f)||, rhs = ||w^b f||^(1-theta) ||J^a f||^theta.
RatioRecord interpolation_check(const RealField& f, double a, double b, double theta,
                                WeightChoice weight = WeightChoice::smooth());

// lhs = ||w^b d^n f||, rhs = ||J^n(w^b f)||, n in {1, 2}.
RatioRecord leibniz_check(const RealField& f, double b, int n, WeightChoice weight = WeightChoice::smooth());

// lhs = || w^r W(t) u0 - W(t)(w^r u0) ||, rhs = (1 + |t|)(||u0|| + ||D^(4r) u0||).
RatioRecord pointwise_formula_residual(const RealField& u0, double r, double t,
                                       WeightChoice weight = WeightChoice::smooth());

struct EnergyBalance {
  std::vector<double> times;     // interior times only
  std::vector<double> lhs;       // centered difference of (pu, u)
  std::vector<double> rhs;       // right-hand side of the weighted identity
  double residual = 0.0;         // sup |lhs - rhs| / normalization
  double normalization = 0.0;
};

// Both sides of d/dt (pu,u) = 5(p'u_xx,u_xx) - 5(p'''u_x,u_x) + (p^(5)u,u)
// + 2/(k+2)(p'u^(k+2),1), p = w^(2r). The residual is normalized by
// sup|rhs|, or by sup (pu,u) when the right side vanishes identically. The
// nonlinear term is dropped for trajectories run with the nonlinearity off.
EnergyBalance weighted_energy_balance(const Trajectory& traj, double r, int k,
                                      WeightChoice weight = WeightChoice::smooth());
double weighted_energy_residual(const Trajectory& traj, double r, int k,
                                WeightChoice weight = WeightChoice::smooth());

struct AprioriBound {
  double max_h2_sq = 0.0;
  double K = 0.0;
};

// K = C (h^2 + h^3 + h^4) for k = 1, K = C h^4 + h^2 for k = 2, h = ||u0||_H2.
AprioriBound apriori_h2_bound(const Trajectory& traj, int k, double C);

// k = 2 only: sup_t ||d_x^2 u||^2 against (1/12) int u0^4 + int (d_x^2 u0)^2.
struct SecondDerivativeBound {
  double max_d2_sq = 0.0;
  double bound = 0.0;
  // (1/6) int u0^4 + int (d_x^2 u0)^2, what conservation of I2 gives directly.
  double conservation_bound = 0.0;
};
SecondDerivativeBound mkdv_second_derivative_bound(const Trajectory& traj);

// One output row per snapshot.
struct SeriesRow {
  double t = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double H2 = 0.0;
  double Hs_target = 0.0;
  double weighted_r = 0.0;
  std::array<double, 5> lambda{};
};

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct DiagnosticsReport {
  std::vector<SeriesRow> rows;
  std::vector<double> lambda;
  double Lambda = 0.0;
  std::vector<InequalityRecord> checks;
};

struct ReportSettings {
  double r = 0.5;
  int k = 1;
  double rho = 1.0;
  double s_target = 2.0;
  WeightChoice weight{};
};

DiagnosticsReport build_report(const Trajectory& traj, const ReportSettings& settings);

}  // namespace kdv5
