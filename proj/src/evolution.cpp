#include "kdv5/evolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kdv5/errors.hpp"

namespace kdv5 {

namespace {

using CVec = std::vector<Complex>;

void check_finite_and_bounded(const RealField& u, double threshold, double t) {
  for (double v : u.samples()) {
    if (!std::isfinite(v) || std::abs(v) > threshold) {
      throw BlowUp("blow-up detected at t = " + std::to_string(t) + " (|u| = " + std::to_string(std::abs(v)) + ")");
    }
  }
}

// Work buffers for repeated nonlinear evaluations on one grid.
class NonlinearEvaluator {
 public:
  NonlinearEvaluator(const Grid& g, int k, bool dealias)
      : grid_(g),
        k_(k),
        cutoff_(dealias ? dealias_cutoff(g) : g.spectrum_size() - 1),
        trunc_(g.spectrum_size()),
        dtrunc_(g.spectrum_size()),
        u_(g.size()),
        ux_(g.size()) {}

  // out = FFT(-u^k u_x), truncated like the input.
  void operator()(const CVec& v, CVec& out) {
    const std::size_t m_size = v.size();
    for (std::size_t m = 0; m < m_size; ++m) {
      if (m <= cutoff_) {
        trunc_[m] = v[m];
        dtrunc_[m] = v[m] * derivative_symbol(grid_.wavenumber(m), grid_.is_nyquist(m), 1);
      } else {
        trunc_[m] = 0.0;
        dtrunc_[m] = 0.0;
      }
    }
    grid_.inverse(trunc_, u_);
    grid_.inverse(dtrunc_, ux_);
    for (std::size_t j = 0; j < u_.size(); ++j) {
      const double uk = k_ == 1 ? u_[j] : u_[j] * u_[j];
      u_[j] = -uk * ux_[j];
    }
    out.resize(m_size);
    grid_.forward(u_, out);
    for (std::size_t m = cutoff_ + 1; m < m_size; ++m) out[m] = 0.0;
  }

 private:
  Grid grid_;
  int k_;
  std::size_t cutoff_;
  CVec trunc_;
  CVec dtrunc_;
  std::vector<double> u_;
  std::vector<double> ux_;
};

// phi-type ETDRK4 coefficients for z = dt * (-i xi^5).
struct EtdCoefficients {
  Complex e, e2, q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(double xi, bool nyquist, double dt) {
  EtdCoefficients c;
  c.e = free_group_symbol(xi, nyquist, dt);
  c.e2 = free_group_symbol(xi, nyquist, 0.5 * dt);
  const double xi5 = nyquist ? 0.0 : std::pow(xi, 5);
  const Complex z(0.0, -dt * xi5);
  if (std::abs(z) >= 0.5) {
    const Complex z3 = z * z * z;
    c.q = dt * (c.e2 - 1.0) / z;
    c.f1 = dt * (-4.0 - z + c.e * (4.0 - 3.0 * z + z * z)) / z3;
    c.f2 = dt * (2.0 + z + c.e * (z - 2.0)) / z3;
    c.f3 = dt * (-4.0 - 3.0 * z - z * z + c.e * (4.0 - z)) / z3;
    return c;
  }
  // Mean over a unit circle around z (Kassam & Trefethen) avoids the
  // cancellation of the closed forms near z = 0.
  constexpr int kPoints = 32;
  Complex q{}, f1{}, f2{}, f3{};
  for (int p = 0; p < kPoints; ++p) {
    const double theta = std::numbers::pi * (p + 0.5) / kPoints;
    const Complex w = z + std::polar(1.0, 2.0 * theta);
    const Complex ew = std::exp(w);
    const Complex w3 = w * w * w;
    q += (std::exp(0.5 * w) - 1.0) / w;
    f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
    f2 += (2.0 + w + ew * (w - 2.0)) / w3;
    f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
  }
  c.q = dt * q / static_cast<double>(kPoints);
  c.f1 = dt * f1 / static_cast<double>(kPoints);
  c.f2 = dt * f2 / static_cast<double>(kPoints);
  c.f3 = dt * f3 / static_cast<double>(kPoints);
  return c;
}

double l2_of(const Grid& g, const CVec& v) {
  double sum = std::norm(v.front()) + std::norm(v.back());
  for (std::size_t m = 1; m + 1 < v.size(); ++m) sum += 2.0 * std::norm(v[m]);
  return std::sqrt(g.length() * sum);
}

double l2_diff(const Grid& g, const CVec& a, const CVec& b) {
  CVec d(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) d[m] = a[m] - b[m];
  return l2_of(g, d);
}

// Phase tables W(t_i) for uniform t_i = i*h.
std::vector<CVec> group_table(const Grid& g, double h, std::size_t nt, double sign) {
  std::vector<CVec> table(nt + 1, CVec(g.spectrum_size()));
  for (std::size_t i = 0; i <= nt; ++i) {
    const double t = sign * h * static_cast<double>(i);
    for (std::size_t m = 0; m < g.spectrum_size(); ++m) table[i][m] = free_group_symbol(g.wavenumber(m), g.is_nyquist(m), t);
  }
  return table;
}

// One application of the Duhamel map: out_i = W(t_i)(U0 + int_0^{t_i} W(-s) N(cur(s)) ds).
void duhamel_sweep(const Grid& g, const CVec& u0_hat, const std::vector<CVec>& cur, double h, bool nonlinear,
                   NonlinearEvaluator& eval, const std::vector<CVec>& forward, const std::vector<CVec>& backward,
                   std::vector<CVec>& out) {
  const std::size_t nt = cur.size() - 1;
  const std::size_t ms = g.spectrum_size();
  out.assign(nt + 1, CVec(ms));
  if (!nonlinear) {
    for (std::size_t i = 0; i <= nt; ++i)
      for (std::size_t m = 0; m < ms; ++m) out[i][m] = forward[i][m] * u0_hat[m];
    return;
  }
  std::vector<CVec> integrand(nt + 1);
  CVec nl;
  for (std::size_t i = 0; i <= nt; ++i) {
    eval(cur[i], nl);
    integrand[i].resize(ms);
    for (std::size_t m = 0; m < ms; ++m) integrand[i][m] = backward[i][m] * nl[m];
  }
  std::vector<CVec> cumulative(nt + 1, CVec(ms));
  for (std::size_t i = 1; i <= nt; ++i) {
    const QuadratureStep step = cumulative_simpson_step(i, nt, h);
    CVec& q = cumulative[i];
    q = cumulative[step.base];
    for (const auto& [j, w] : step.terms)
      for (std::size_t m = 0; m < ms; ++m) q[m] += w * integrand[j][m];
  }
  for (std::size_t i = 0; i <= nt; ++i)
    for (std::size_t m = 0; m < ms; ++m) out[i][m] = forward[i][m] * (u0_hat[m] + cumulative[i][m]);
}

CVec spectrum_of(const RealField& f) {
  CVec v(f.grid().spectrum_size());
  f.grid().forward(f.samples(), v);
  return v;
}

RealField field_of(const Grid& g, const CVec& v) {
  RealField f = RealField::zeros(g);
  g.inverse(v, f.samples());
  return f;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Picard: return "picard";
    case Scheme::Etdrk4: return "etdrk4";
    case Scheme::Free: return "free";
  }
  return "unknown";
}

void check_power(int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("nonlinearity power k must be 1 or 2, got " + std::to_string(k));
}

std::size_t dealias_cutoff(const Grid& g) { return g.size() / 3; }

Spectrum nonlinear_term(const Spectrum& s, int k, bool dealias) {
  check_power(k);
  NonlinearEvaluator eval(s.grid(), k, dealias);
  CVec in(s.half().begin(), s.half().end());
  CVec out;
  eval(in, out);
  return Spectrum(s.grid(), std::move(out));
}

RealField nonlinear_term(const RealField& f, int k, bool dealias) {
  return from_spectrum(nonlinear_term(to_spectrum(f), k, dealias));
}

Trajectory integrate(const RealField& u0, double T, double dt, int k, const EvolutionOptions& opts) {
  check_power(k);
  if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("integrate: need dt > 0 and T >= 0");
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("integrate: T/dt must be an integer");
  }
  if (opts.store_every == 0) throw std::invalid_argument("integrate: store_every must be positive");
  check_finite_and_bounded(u0, opts.blowup_threshold, 0.0);

  const Grid& g = u0.grid();
  const std::size_t ms = g.spectrum_size();
  std::vector<EtdCoefficients> coef(ms);
  for (std::size_t m = 0; m < ms; ++m) coef[m] = etd_coefficients(g.wavenumber(m), g.is_nyquist(m), dt);

  Trajectory traj;
  traj.k = k;
  traj.scheme = Scheme::Etdrk4;
  traj.dt = dt;
  traj.dealias = opts.dealias;
  traj.nonlinear = opts.nonlinear;
  traj.times.push_back(0.0);
  traj.fields.push_back(u0);

  NonlinearEvaluator eval(g, k, opts.dealias);
  CVec v = spectrum_of(u0);
  CVec a(ms), b(ms), c(ms), nv, na, nb, nc;

  for (std::size_t step = 1; step <= steps; ++step) {
    if (opts.nonlinear) {
      eval(v, nv);
      for (std::size_t m = 0; m < ms; ++m) a[m] = coef[m].e2 * v[m] + coef[m].q * nv[m];
      eval(a, na);
      for (std::size_t m = 0; m < ms; ++m) b[m] = coef[m].e2 * v[m] + coef[m].q * na[m];
      eval(b, nb);
      for (std::size_t m = 0; m < ms; ++m) c[m] = coef[m].e2 * a[m] + coef[m].q * (2.0 * nb[m] - nv[m]);
      eval(c, nc);
      for (std::size_t m = 0; m < ms; ++m) {
        v[m] = coef[m].e * v[m] + nv[m] * coef[m].f1 + 2.0 * (na[m] + nb[m]) * coef[m].f2 + nc[m] * coef[m].f3;
      }
    } else {
      for (std::size_t m = 0; m < ms; ++m) v[m] *= coef[m].e;
    }
    const double t = (step == steps) ? T : dt * static_cast<double>(step);
    const bool store = step % opts.store_every == 0 || step == steps;
    RealField u = field_of(g, v);
    check_finite_and_bounded(u, opts.blowup_threshold, t);
    if (store) {
      traj.times.push_back(t);
      traj.fields.push_back(std::move(u));
    }
  }
  return traj;
}

Trajectory free_trajectory(const RealField& u0, double T, std::size_t nt) {
  if (nt == 0) throw std::invalid_argument("free_trajectory: nt must be positive");
  Trajectory traj;
  traj.scheme = Scheme::Free;
  traj.nonlinear = false;
  traj.dt = T / static_cast<double>(nt);
  const Spectrum s = to_spectrum(u0);
  for (std::size_t i = 0; i <= nt; ++i) {
    const double t = (i == nt) ? T : traj.dt * static_cast<double>(i);
    traj.times.push_back(t);
    traj.fields.push_back(i == 0 ? u0 : from_spectrum(free_propagate(s, t)));
  }
  return traj;
}

QuadratureStep cumulative_simpson_step(std::size_t i, std::size_t last, double h) {
  if (i == 0 || i > last) throw std::invalid_argument("cumulative_simpson_step: index out of range");
  if (i == 1) {
    if (last == 1) return {0, {{0, 0.5 * h}, {1, 0.5 * h}}};
    // Quadratic through t0, t1, t2 integrated over [t0, t1].
    return {0, {{0, 5.0 * h / 12.0}, {1, 8.0 * h / 12.0}, {2, -h / 12.0}}};
  }
  if (i % 2 == 0) {
    return {i - 2, {{i - 2, h / 3.0}, {i - 1, 4.0 * h / 3.0}, {i, h / 3.0}}};
  }
  // Simpson's 3/8 on the last three intervals.
  return {i - 3, {{i - 3, 3.0 * h / 8.0}, {i - 2, 9.0 * h / 8.0}, {i - 1, 9.0 * h / 8.0}, {i, 3.0 * h / 8.0}}};
}

std::vector<double> cumulative_simpson(const std::vector<double>& values, double h) {
  std::vector<double> q(values.size(), 0.0);
  if (values.empty()) return q;
  const std::size_t last = values.size() - 1;
  for (std::size_t i = 1; i <= last; ++i) {
    const QuadratureStep step = cumulative_simpson_step(i, last, h);
    double s = q[step.base];
    for (const auto& [j, w] : step.terms) s += w * values[j];
    q[i] = s;
  }
  return q;
}

Trajectory picard_solve(const RealField& u0, double T, std::size_t nt, int k, double tol, int max_iter,
                        const PicardOptions& opts) {
  check_power(k);
  if (!(T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  if (nt == 0 || max_iter <= 0) throw std::invalid_argument("picard_solve: nt and max_iter must be positive");
  check_finite_and_bounded(u0, opts.blowup_threshold, 0.0);

  const Grid& g = u0.grid();
  const double h = T / static_cast<double>(nt);
  const auto forward = group_table(g, h, nt, 1.0);
  const auto backward = group_table(g, h, nt, -1.0);
  const CVec u0_hat = spectrum_of(u0);
  NonlinearEvaluator eval(g, k, opts.dealias);

  std::vector<CVec> cur(nt + 1, CVec(g.spectrum_size()));
  for (std::size_t i = 0; i <= nt; ++i)
    for (std::size_t m = 0; m < g.spectrum_size(); ++m) cur[i][m] = forward[i][m] * u0_hat[m];

  std::vector<CVec> next;
  double update = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    duhamel_sweep(g, u0_hat, cur, h, opts.nonlinear, eval, forward, backward, next);
    update = 0.0;
    for (std::size_t i = 0; i <= nt; ++i) update = std::max(update, l2_diff(g, next[i], cur[i]));
    cur.swap(next);
    if (!std::isfinite(update)) throw BlowUp("picard_solve: non-finite iterate");

    if (update < tol) {
      Trajectory traj;
      traj.k = k;
      traj.scheme = Scheme::Picard;
      traj.dt = h;
      traj.dealias = opts.dealias;
      traj.nonlinear = opts.nonlinear;
      traj.iterations = iter;
      traj.last_update = update;
      for (std::size_t i = 0; i <= nt; ++i) {
        const double t = (i == nt) ? T : h * static_cast<double>(i);
        RealField u = i == 0 ? u0 : field_of(g, cur[i]);
        check_finite_and_bounded(u, opts.blowup_threshold, t);
        traj.times.push_back(t);
        traj.fields.push_back(std::move(u));
      }
      return traj;
    }
  }
  throw NoContraction("picard_solve: no contraction after " + std::to_string(max_iter) +
                          " iterations on [0, " + std::to_string(T) + "]",
                      max_iter, update);
}

Trajectory picard_solve_halving(const RealField& u0, double T, std::size_t nt, int k, double tol, int max_iter,
                                double min_T, const PicardOptions& opts) {
  double window = T;
  while (true) {
    try {
      return picard_solve(u0, window, nt, k, tol, max_iter, opts);
    } catch (const NoContraction&) {
      window *= 0.5;
      if (window < min_T) throw;
    }
  }
}

double duhamel_residual(const Trajectory& traj, int k, bool nonlinear) {
  check_power(k);
  if (traj.empty()) throw std::invalid_argument("duhamel_residual: empty trajectory");
  if (traj.size() == 1) return 0.0;
  const std::size_t nt = traj.size() - 1;
  const double h = traj.final_time() / static_cast<double>(nt);
  for (std::size_t i = 0; i <= nt; ++i) {
    if (std::abs(traj.times[i] - h * static_cast<double>(i)) > 1e-9 * std::max(1.0, traj.final_time())) {
      throw std::invalid_argument("duhamel_residual: trajectory times must be uniform from 0");
    }
  }
  const Grid& g = traj.grid();
  const auto forward = group_table(g, h, nt, 1.0);
  const auto backward = group_table(g, h, nt, -1.0);
  std::vector<CVec> cur(nt + 1);
  for (std::size_t i = 0; i <= nt; ++i) cur[i] = spectrum_of(traj.fields[i]);
  NonlinearEvaluator eval(g, k, traj.dealias);
  std::vector<CVec> mapped;
  duhamel_sweep(g, cur.front(), cur, h, nonlinear, eval, forward, backward, mapped);
  double worst = 0.0;
  for (std::size_t i = 0; i <= nt; ++i) worst = std::max(worst, l2_diff(g, mapped[i], cur[i]));
  return worst;
}

}  // namespace kdv5
