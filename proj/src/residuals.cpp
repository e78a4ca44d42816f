#include "corot/residuals.hpp"

#include <cmath>

#include "corot/errors.hpp"
#include "corot/fd.hpp"

namespace corot {

std::vector<double> momentum_constraint_residual(const History& h, int ti) {
  if (ti <= 0 || ti >= h.size() - 1)
    throw BoundaryTime("momentum constraint needs an interior stored time");
  const Slice& s = h.slice(ti);
  const Slice& sm = h.slice(ti - 1);
  const Slice& sp = h.slice(ti + 1);
  const double dt2 = sp.t - sm.t;
  const int n = s.grid.n_points;
  const auto ur = s.u_r();

  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) {
    const double gamma_t = (sp.gamma[i] - sm.gamma[i]) / dt2;
    const double u_t = std::exp(s.omega[i] - s.gamma[i]) * s.pi[i];
    res[i] = gamma_t - s.grid.r(i) * s.alpha * u_t * ur[i];
  }
  return res;
}

EinsteinResiduals einstein_residuals(const History& h, int ti, const TargetManifold& target) {
  if (ti <= 0 || ti >= h.size() - 1)
    throw BoundaryTime("einstein residuals need an interior stored time");
  const Slice& s = h.slice(ti);
  const Slice& sm = h.slice(ti - 1);
  const Slice& sp = h.slice(ti + 1);
  const double dt = 0.5 * (sp.t - sm.t);
  const int n = s.grid.n_points;
  const double dr = s.grid.dr;
  const double a = s.alpha;
  const double k2 = static_cast<double>(s.k) * s.k;

  const auto gamma_r = radial_derivative(s.gamma, dr, Parity::Even);
  const auto omega_r = radial_derivative(s.omega, dr, Parity::Even);
  const auto omega_rr = radial_derivative(omega_r, dr, Parity::Odd);
  const auto ur = s.u_r();

  EinsteinResiduals out;
  out.tt.resize(n);
  out.tr.resize(n);
  out.rr.resize(n);
  out.thth.resize(n);

  for (int i = 0; i < n; ++i) {
    const double r = s.grid.r(i);
    const double gamma_t = (sp.gamma[i] - sm.gamma[i]) / (2.0 * dt);
    const double omega_t = (sp.omega[i] - sm.omega[i]) / (2.0 * dt);
    const double gamma_tt = (sp.gamma[i] - 2.0 * s.gamma[i] + sm.gamma[i]) / (dt * dt);

    const double u_t = std::exp(s.omega[i] - s.gamma[i]) * s.pi[i];
    const double u = r * s.v[i];
    const double fou = target.f_over_u(u);
    const double f2r2 = k2 * fou * fou * s.v[i] * s.v[i];  // k^2 f^2/r^2
    const double e2O = std::exp(2.0 * s.omega[i]);
    const double e2g = std::exp(2.0 * s.gamma[i]);
    const double trace = -u_t * u_t / e2O + ur[i] * ur[i] / e2g + f2r2;

    const double T_tt = u_t * u_t + 0.5 * e2O * trace;
    const double T_tr = u_t * ur[i];
    const double T_rr = ur[i] * ur[i] - 0.5 * e2g * trace;
    const double T_thth = k2 * fou * fou * u * u - 0.5 * r * r * trace;

    // gamma_r/r and gamma_t/r have even, axis-regular limits
    const double gr_over_r = (i == 0) ? 2.0 * (s.gamma[1] - s.gamma[0]) / (dr * dr)
                                      : gamma_r[i] / r;
    // gamma_t vanishes on the axis and is even, so gamma_t/r -> 0 there
    const double gt_over_r = (i == 0) ? 0.0 : gamma_t / r;
    const double or_over_r = (i == 0) ? 2.0 * (s.omega[1] - s.omega[0]) / (dr * dr)
                                      : omega_r[i] / r;

    out.tt[i] = std::exp(2.0 * (s.omega[i] - s.gamma[i])) * gr_over_r - a * T_tt;
    out.tr[i] = gt_over_r - a * T_tr;
    out.rr[i] = or_over_r - a * T_rr;
    out.thth[i] =
        r * r * (std::exp(-2.0 * s.gamma[i]) *
                     (-gamma_r[i] * omega_r[i] + omega_r[i] * omega_r[i] + omega_rr[i]) -
                 std::exp(-2.0 * s.omega[i]) *
                     (gamma_t * gamma_t - gamma_t * omega_t + gamma_tt)) -
        a * T_thth;
  }
  return out;
}

}  // namespace corot
