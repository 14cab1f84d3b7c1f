#include "kdv5/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdv5 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double power_sum(const std::vector<double>& v, double p, double dx) {
  if (std::isinf(p)) return *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return std::pow(dx * s, 1.0 / p);
}

RealField weighted(const RealField& f, double q, double N) {
  const auto w = truncated_weight(f.grid(), N, 0);
  RealField out = f;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::pow(w[j], q);
  return out;
}

void require_nonzero(const RealField& f, const char* what) {
  if (f.max_abs() == 0.0) throw std::invalid_argument(std::string(what) + ": field must be nonzero");
}

}  // namespace

double sobolev_norm(const Spectrum& f, double s) {
  if (s < -2.0) throw std::invalid_argument("sobolev_norm: s must be >= -2");
  const Grid& g = f.grid();
  const auto h = f.half();
  double sum = 0.0;
  for (std::size_t m = 0; m < h.size(); ++m) {
    const double mult = (m == 0 || g.is_nyquist(m)) ? 1.0 : 2.0;
    sum += mult * std::pow(1.0 + g.wavenumber(m) * g.wavenumber(m), s) * std::norm(h[m]);
  }
  return std::sqrt(g.length() * sum);
}

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(to_spectrum(f), s); }

double box_integral(const RealField& f) {
  double s = 0.0;
  for (double v : f.samples()) s += v;
  return f.grid().dx() * s;
}

double weighted_l2_norm(const RealField& f, double r, WeightChoice weight) {
  if (r == 0.0) return sobolev_norm(f, 0.0);
  const auto w = truncated_weight(f.grid(), weight.resolve(f.grid()), 0);
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * f[j] * std::pow(w[j], 2.0 * r);
  return std::sqrt(f.grid().dx() * s);
}

ConservedQuantities conserved_quantities(const RealField& f, int k) {
  check_power(k);
  const Spectrum s = to_spectrum(f);
  const double d2 = l2_norm(apply_symbol(s, [](double xi, bool nyq) { return derivative_symbol(xi, nyq, 2); }));
  const double d2_sq = d2 * d2;
  double power = 0.0;
  for (double v : f.samples()) power += k == 1 ? v * v * v : v * v * v * v;
  power *= f.grid().dx();
  ConservedQuantities c;
  c.I1 = s.energy();
  // Quartic coefficient 1/((k+1)(k+2)) against 1/2 on the curvature term;
  // (1/12) int u^4 + int u_xx^2 is not invariant under the k = 2 flow.
  c.I2 = k == 1 ? power / 6.0 + 0.5 * d2_sq : power / 12.0 + 0.5 * d2_sq;
  return c;
}

NormSpec NormSpec::sobolev(double s, std::string label) {
  NormSpec n;
  n.kind = NormKind::Sobolev;
  n.order = s;
  n.label = std::move(label);
  return n;
}

NormSpec NormSpec::weighted(double r, WeightChoice w, std::string label) {
  NormSpec n;
  n.kind = NormKind::Weighted;
  n.r = r;
  n.weight = w;
  n.label = std::move(label);
  return n;
}

NormSpec NormSpec::mixed(double p, double q, Prefix prefix, double order, std::string label) {
  NormSpec n;
  n.kind = NormKind::Mixed;
  n.p = p;
  n.q = q;
  n.prefix = prefix;
  n.order = order;
  n.label = std::move(label);
  return n;
}

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

RealField apply_prefix(const RealField& f, Prefix prefix, double order) {
  switch (prefix) {
    case Prefix::None: return f;
    case Prefix::Dx: return derivative(f, 1);
    case Prefix::Dx2: return derivative(f, 2);
    case Prefix::Dx4: return derivative(f, 4);
    case Prefix::FractionalDx: return fractional_derivative(derivative(f, 1), order);
  }
  return f;
}

double mixed_spacetime_norm(const Trajectory& traj, const NormSpec& spec) {
  if (traj.empty()) throw std::invalid_argument("mixed_spacetime_norm: empty trajectory");
  double value = 0.0;
  if (spec.kind == NormKind::Sobolev) {
    for (const auto& u : traj.fields) value = std::max(value, sobolev_norm(u, spec.order));
  } else if (spec.kind == NormKind::Weighted) {
    for (const auto& u : traj.fields) value = std::max(value, weighted_l2_norm(u, spec.r, spec.weight));
  } else {
    const std::size_t nt = traj.size();
    const std::size_t n = traj.grid().size();
    const double dx = traj.grid().dx();
    std::vector<std::vector<double>> v(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      const RealField pf = apply_prefix(traj.fields[i], spec.prefix, spec.order);
      v[i].resize(n);
      for (std::size_t j = 0; j < n; ++j) v[i][j] = std::abs(pf[j]);
    }
    const std::vector<double> tw = trapezoid_weights(traj.times);
    auto time_norm = [&](auto&& at) {
      if (std::isinf(spec.q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < nt; ++i) m = std::max(m, at(i));
        return m;
      }
      double s = 0.0;
      for (std::size_t i = 0; i < nt; ++i) s += tw[i] * std::pow(at(i), spec.q);
      return std::pow(s, 1.0 / spec.q);
    };
    if (spec.time_outer) {
      std::vector<double> inner(nt);
      for (std::size_t i = 0; i < nt; ++i) inner[i] = power_sum(v[i], spec.p, dx);
      value = time_norm([&](std::size_t i) { return inner[i]; });
    } else {
      std::vector<double> inner(n);
      for (std::size_t j = 0; j < n; ++j) inner[j] = time_norm([&](std::size_t i) { return v[i][j]; });
      value = power_sum(inner, spec.p, dx);
    }
  }
  if (spec.rho > 0.0) value *= std::pow(1.0 + traj.final_time(), -spec.rho);
  return value;
}

std::vector<NormSpec> lambda_specs(double r, int k, double rho, WeightChoice weight) {
  check_power(k);
  std::vector<NormSpec> specs;
  if (k == 1) {
    if (!(rho > 0.75)) throw std::invalid_argument("lambda_specs: rho must exceed 3/4");
    specs.push_back(NormSpec::sobolev(4.0 * r, "lambda1"));
    NormSpec l2 = NormSpec::mixed(kInfExponent, 4.0, Prefix::Dx, 0.0, "lambda2");
    l2.time_outer = true;
    specs.push_back(l2);
    specs.push_back(NormSpec::mixed(kInfExponent, 2.0, Prefix::FractionalDx, 4.0 * r, "lambda3"));
    NormSpec l4 = NormSpec::mixed(2.0, kInfExponent, Prefix::None, 0.0, "lambda4");
    l4.rho = rho;
    specs.push_back(l4);
    specs.push_back(NormSpec::weighted(r, weight, "lambda5"));
  } else {
    specs.push_back(NormSpec::sobolev(2.0, "lambda1"));
    specs.push_back(NormSpec::mixed(kInfExponent, 2.0, Prefix::Dx4, 0.0, "lambda2"));
    specs.push_back(NormSpec::mixed(16.0 / 5.0, kInfExponent, Prefix::None, 0.0, "lambda3"));
    specs.push_back(NormSpec::mixed(4.0, kInfExponent, Prefix::None, 0.0, "lambda4"));
  }
  return specs;
}

LambdaNorms lambda_norms(const Trajectory& traj, double r, int k, double rho, WeightChoice weight) {
  LambdaNorms out;
  for (const NormSpec& spec : lambda_specs(r, k, rho, weight)) {
    out.lambda.push_back(mixed_spacetime_norm(traj, spec));
    out.Lambda = std::max(out.Lambda, out.lambda.back());
  }
  return out;
}

// ---------------------------------------------------------------------------

LambdaAccumulator::LambdaAccumulator(const Grid& g, double r, int k, double rho, WeightChoice weight)
    : grid_(g),
      r_(r),
      k_(k),
      rho_(rho),
      weight_N_(weight.resolve(g)),
      sq_sum_(g.size(), 0.0),
      prev_sq_(g.size(), 0.0),
      running_max_(g.size(), 0.0) {
  check_power(k);
}

void LambdaAccumulator::push(double t, const RealField& u) {
  const std::size_t n = grid_.size();
  const bool first = count_ == 0;
  const double h = first ? 0.0 : t - t_last_;

  if (k_ == 1) {
    lambda1_ = std::max(lambda1_, sobolev_norm(u, 4.0 * r_));
    lambda5_ = std::max(lambda5_, weighted_l2_norm(u, r_, WeightChoice::truncated(weight_N_)));
    const double dx_inf = derivative(u, 1).max_abs();
    const double term = std::pow(dx_inf, 4.0);
    if (!first) time_outer_sum_ += 0.5 * h * (prev_time_outer_ + term);
    prev_time_outer_ = term;
  } else {
    lambda1_ = std::max(lambda1_, sobolev_norm(u, 2.0));
  }

  const RealField pf = k_ == 1 ? apply_prefix(u, Prefix::FractionalDx, 4.0 * r_) : apply_prefix(u, Prefix::Dx4, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double sq = pf[j] * pf[j];
    if (!first) sq_sum_[j] += 0.5 * h * (prev_sq_[j] + sq);
    prev_sq_[j] = sq;
    running_max_[j] = std::max(running_max_[j], std::abs(u[j]));
  }
  t_last_ = t;
  ++count_;
}

std::array<double, 5> LambdaAccumulator::current() const {
  std::array<double, 5> out{kNaN, kNaN, kNaN, kNaN, kNaN};
  if (count_ == 0) return out;
  const double dx = grid_.dx();
  const double sq_max = std::sqrt(*std::max_element(sq_sum_.begin(), sq_sum_.end()));
  out[0] = lambda1_;
  if (k_ == 1) {
    out[1] = std::pow(time_outer_sum_, 0.25);
    out[2] = sq_max;
    out[3] = power_sum(running_max_, 2.0, dx) * std::pow(1.0 + t_last_, -rho_);
    out[4] = lambda5_;
  } else {
    out[1] = sq_max;
    out[2] = power_sum(running_max_, 16.0 / 5.0, dx);
    out[3] = power_sum(running_max_, 4.0, dx);
  }
  return out;
}

// ---------------------------------------------------------------------------

RatioRecord interpolation_check(const RealField& f, double a, double b, double theta, WeightChoice weight) {
  require_nonzero(f, "interpolation_check");
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("interpolation_check: a and b must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("interpolation_check: theta must lie in (0, 1)");
  const double N = weight.resolve(f.grid());
  RatioRecord rec;
  rec.lhs = sobolev_norm(weighted(f, (1.0 - theta) * b, N), theta * a);
  rec.rhs = std::pow(weighted_l2_norm(f, b, WeightChoice::truncated(N)), 1.0 - theta) *
            std::pow(sobolev_norm(f, a), theta);
  return rec;
}

RatioRecord leibniz_check(const RealField& f, double b, int n, WeightChoice weight) {
  require_nonzero(f, "leibniz_check");
  if (!(b > 0.0)) throw std::invalid_argument("leibniz_check: b must be positive");
  if (n != 1 && n != 2) throw std::invalid_argument("leibniz_check: n must be 1 or 2");
  const double N = weight.resolve(f.grid());
  RatioRecord rec;
  rec.lhs = weighted_l2_norm(derivative(f, n), b, WeightChoice::truncated(N));
  rec.rhs = sobolev_norm(weighted(f, b, N), static_cast<double>(n));
  return rec;
}

RatioRecord pointwise_formula_residual(const RealField& u0, double r, double t, WeightChoice weight) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("pointwise_formula_residual: r must lie in (0, 1)");
  const double N = weight.resolve(u0.grid());
  RatioRecord rec;
  const RealField lhs = weighted(free_propagate(u0, t), r, N) - free_propagate(weighted(u0, r, N), t);
  rec.lhs = l2_norm(lhs);
  rec.rhs = (1.0 + std::abs(t)) * (l2_norm(u0) + l2_norm(fractional_derivative(u0, 4.0 * r)));
  return rec;
}

EnergyBalance weighted_energy_balance(const Trajectory& traj, double r, int k, WeightChoice weight) {
  check_power(k);
  EnergyBalance bal;
  if (traj.size() < 3) throw std::invalid_argument("weighted_energy_balance: need at least 3 snapshots");
  const Grid& g = traj.grid();
  const auto p = truncated_weight_power(g, weight.resolve(g), 2.0 * r);
  const double dx = g.dx();
  const std::size_t n = g.size();

  std::vector<double> energy(traj.size()), rhs(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const RealField& u = traj.fields[i];
    const RealField ux = derivative(u, 1);
    const RealField uxx = derivative(u, 2);
    double e = 0.0, t1 = 0.0, t3 = 0.0, t5 = 0.0, tn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double uj = u[j];
      e += p[0][j] * uj * uj;
      t1 += p[1][j] * uxx[j] * uxx[j];
      t3 += p[3][j] * ux[j] * ux[j];
      t5 += p[5][j] * uj * uj;
      if (traj.nonlinear) tn += p[1][j] * std::pow(uj, k + 2);
    }
    energy[i] = dx * e;
    rhs[i] = dx * (5.0 * t1 - 5.0 * t3 + t5 + 2.0 / (k + 2.0) * tn);
  }

  double worst = 0.0, rhs_scale = 0.0, energy_scale = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double lhs = (energy[i + 1] - energy[i - 1]) / (traj.times[i + 1] - traj.times[i - 1]);
    bal.times.push_back(traj.times[i]);
    bal.lhs.push_back(lhs);
    bal.rhs.push_back(rhs[i]);
    worst = std::max(worst, std::abs(lhs - rhs[i]));
    rhs_scale = std::max(rhs_scale, std::abs(rhs[i]));
  }
  for (double e : energy) energy_scale = std::max(energy_scale, std::abs(e));
  bal.normalization = rhs_scale > 1e-14 * energy_scale ? rhs_scale : energy_scale;
  bal.residual = bal.normalization > 0.0 ? worst / bal.normalization : 0.0;
  return bal;
}

double weighted_energy_residual(const Trajectory& traj, double r, int k, WeightChoice weight) {
  return weighted_energy_balance(traj, r, k, weight).residual;
}

AprioriBound apriori_h2_bound(const Trajectory& traj, int k, double C) {
  check_power(k);
  AprioriBound b;
  for (const auto& u : traj.fields) {
    const double h = sobolev_norm(u, 2.0);
    b.max_h2_sq = std::max(b.max_h2_sq, h * h);
  }
  const double h0 = sobolev_norm(traj.initial(), 2.0);
  const double h2 = h0 * h0;
  b.K = k == 1 ? C * (h2 + h2 * h0 + h2 * h2) : C * h2 * h2 + h2;
  return b;
}

SecondDerivativeBound mkdv_second_derivative_bound(const Trajectory& traj) {
  SecondDerivativeBound b;
  for (const auto& u : traj.fields) {
    const double d2 = l2_norm(derivative(u, 2));
    b.max_d2_sq = std::max(b.max_d2_sq, d2 * d2);
  }
  const RealField& u0 = traj.initial();
  double quartic = 0.0;
  for (double v : u0.samples()) quartic += v * v * v * v;
  const double d2 = l2_norm(derivative(u0, 2));
  b.bound = u0.grid().dx() * quartic / 12.0 + d2 * d2;
  b.conservation_bound = u0.grid().dx() * quartic / 6.0 + d2 * d2;
  return b;
}

DiagnosticsReport build_report(const Trajectory& traj, const ReportSettings& settings) {
  DiagnosticsReport rep;
  LambdaAccumulator acc(traj.grid(), settings.r, settings.k, settings.rho, settings.weight);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const RealField& u = traj.fields[i];
    acc.push(traj.times[i], u);
    const ConservedQuantities c = conserved_quantities(u, settings.k);
    SeriesRow row;
    row.t = traj.times[i];
    row.I1 = c.I1;
    row.I2 = c.I2;
    row.H2 = sobolev_norm(u, 2.0);
    row.Hs_target = sobolev_norm(u, settings.s_target);
    row.weighted_r = weighted_l2_norm(u, settings.r, settings.weight);
    row.lambda = acc.current();
    rep.rows.push_back(row);
  }
  rep.lambda.clear();
  const auto last = acc.current();
  const std::size_t count = settings.k == 1 ? 5 : 4;
  for (std::size_t i = 0; i < count; ++i) {
    rep.lambda.push_back(last[i]);
    rep.Lambda = std::max(rep.Lambda, last[i]);
  }
  return rep;
}

}  // namespace kdv5
