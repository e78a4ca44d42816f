#include "corot/vfm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corot/errors.hpp"
#include "corot/fd.hpp"

namespace corot {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_exponent(double a) {
  if (!(a > 0.5 && a < 1.0))
    throw ConfigError("multiplier exponent a must lie strictly in (1/2, 1)");
}
}  // namespace

Multiplier Multiplier::X4(double a) {
  require_exponent(a);
  return {Kind::X4, a, 0.0};
}

Multiplier Multiplier::Kappa(double a) {
  require_exponent(a);
  return {Kind::Kappa, a, 0.0};
}

Multiplier Multiplier::by_name(const std::string& name) {
  if (name == "X1") return X1();
  if (name == "X2") return X2();
  if (name == "X3") return X3();
  if (name == "X4") return X4();
  if (name == "kappa") return Kappa();
  throw ConfigError("unknown multiplier '" + name + "' (X1|X2|X3|X4|kappa)");
}

std::string Multiplier::name() const {
  switch (kind) {
    case Kind::X1: return "X1";
    case Kind::X2: return "X2";
    case Kind::X3: return "X3";
    case Kind::X4: return "X4";
    case Kind::Kappa: return "kappa";
  }
  return "?";
}

double Multiplier::Fc(double, double, double omega) const {
  return kind == Kind::X1 ? std::exp(-omega) : 0.0;
}

double Multiplier::Gc(double r, double gamma, double) const {
  switch (kind) {
    case Kind::X1: return 0.0;
    case Kind::X2: return std::exp(-gamma);
    case Kind::X3: return r * std::exp(-k_exp * gamma);
    case Kind::X4: return std::pow(r, a);
    case Kind::Kappa: break;
  }
  throw ConfigError("kappa has no multiplier coefficients");
}

MomentumField momentum(const Slice& s, const Multiplier& X, const Densities& d,
                       const TargetManifold&) {
  const int n = s.grid.n_points;
  MomentumField P;
  P.Pt.resize(n);
  P.Pr.resize(n);

  if (X.is_kappa()) {
    // P_kappa^nu = kappa u^nu u - (grad^nu kappa) u^2 / 2,
    // kappa = (1-a)/2 r^{a-1}; only the radial gradient survives
    const auto ur = s.u_r();
    for (int i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      const double u = r * s.v[i];
      if (i == 0) {
        // kappa ~ r^{a-1} diverges but u ~ r: u^t u kappa ~ r^{a}; limit 0
        P.Pt[0] = 0.0;
        P.Pr[0] = 0.0;
        continue;
      }
      const double kap = 0.5 * (1.0 - X.a) * std::pow(r, X.a - 1.0);
      const double kap_r = 0.5 * (1.0 - X.a) * (X.a - 1.0) * std::pow(r, X.a - 2.0);
      const double u_t = std::exp(s.omega[i] - s.gamma[i]) * s.pi[i];
      P.Pt[i] = -kap * std::exp(-2.0 * s.omega[i]) * u_t * u;
      P.Pr[i] = std::exp(-2.0 * s.gamma[i]) * (kap * ur[i] * u - 0.5 * kap_r * u * u);
    }
    return P;
  }

  for (int i = 0; i < n; ++i) {
    const double r = s.grid.r(i);
    const double F = X.Fc(r, s.gamma[i], s.omega[i]);
    const double G = X.Gc(r, s.gamma[i], s.omega[i]);
    P.Pt[i] = -(d.e[i] * F + std::exp(s.gamma[i] - s.omega[i]) * d.m[i] * G);
    P.Pr[i] = std::exp(s.omega[i] - s.gamma[i]) * d.m[i] * F + (d.e[i] - d.fpot[i]) * G;
  }
  return P;
}

DeformationField deformation(const History& h, int ti, const Multiplier& X) {
  if (X.is_kappa()) throw ConfigError("kappa is not a T(X) multiplier");
  if (ti <= 0 || ti >= h.size() - 1)
    throw BoundaryTime("deformation needs an interior stored time");
  const Slice& s = h.slice(ti);
  const Slice& sm = h.slice(ti - 1);
  const Slice& sp = h.slice(ti + 1);
  const double dt2 = sp.t - sm.t;
  const int n = s.grid.n_points;
  const double dr = s.grid.dr;

  const auto gamma_r = radial_derivative(s.gamma, dr, Parity::Even);
  const auto omega_r = radial_derivative(s.omega, dr, Parity::Even);

  DeformationField out;
  out.tt.resize(n);
  out.tr.resize(n);
  out.rr.resize(n);
  out.thth.resize(n);

  // F and G as grids at the three levels, differentiated directly
  auto Fg = [&](const Slice& sl, int i) {
    return X.Fc(sl.grid.r(i), sl.gamma[i], sl.omega[i]);
  };
  auto Gg = [&](const Slice& sl, int i) {
    return X.Gc(sl.grid.r(i), sl.gamma[i], sl.omega[i]);
  };

  std::vector<double> Fnow(n), Gnow(n);
  for (int i = 0; i < n; ++i) {
    Fnow[i] = Fg(s, i);
    Gnow[i] = Gg(s, i);
  }
  // radial components vanish at the axis except for X2, whose e^{-gamma} is even
  const Parity g_parity = X.kind == Multiplier::Kind::X2 ? Parity::Even : Parity::Odd;
  const auto F_r = radial_derivative(Fnow, dr, Parity::Even);
  const auto G_r = radial_derivative(Gnow, dr, g_parity);

  for (int i = 0; i < n; ++i) {
    const double gamma_t = (sp.gamma[i] - sm.gamma[i]) / dt2;
    const double omega_t = (sp.omega[i] - sm.omega[i]) / dt2;
    const double F_t = (Fg(sp, i) - Fg(sm, i)) / dt2;
    const double G_t = (Gg(sp, i) - Gg(sm, i)) / dt2;
    const double e2O = std::exp(2.0 * s.omega[i]);
    const double e2g = std::exp(2.0 * s.gamma[i]);
    out.tt[i] = -2.0 * e2O * (F_t + Fnow[i] * omega_t + Gnow[i] * omega_r[i]);
    out.tr[i] = e2g * G_t - e2O * F_r[i];
    out.rr[i] = 2.0 * e2g * (G_r[i] + Gnow[i] * gamma_r[i] + Fnow[i] * gamma_t);
    out.thth[i] = 2.0 * s.grid.r(i) * Gnow[i];
  }
  return out;
}

std::vector<double> divergence_bulk(const Slice& s, const Multiplier& X,
                                    const Densities& d, const TargetManifold& target) {
  const int n = s.grid.n_points;
  const double a = s.alpha;
  const double k2 = static_cast<double>(s.k) * s.k;
  std::vector<double> out(n, 0.0);
  const auto ur = s.u_r();

  switch (X.kind) {
    case Multiplier::Kind::X1:
      // identically zero once gamma_t and Omega_r are eliminated
      return out;

    case Multiplier::Kind::X2: {
      for (int i = 1; i < n; ++i) {
        const double r = s.grid.r(i);
        const double eg = std::exp(-s.gamma[i]);
        const double x1sq = std::exp(-2.0 * s.gamma[i]) * s.pi[i] * s.pi[i];
        const double x2sq = std::exp(-2.0 * s.gamma[i]) * ur[i] * ur[i];
        // constraint substitutions for Omega_r and gamma_t
        const double Omega_r = a * r * std::exp(2.0 * s.gamma[i]) * (d.e[i] - d.fpot[i]);
        const double gamma_t =
            a * r * std::exp(s.gamma[i] + s.omega[i]) * d.m[i];
        out[i] = -eg * Omega_r * d.e[i] +
                 (eg / (2.0 * r)) * (x1sq - x2sq + d.fpot[i]) +
                 std::exp(-s.omega[i]) * gamma_t * d.m[i];
      }
      // k=1 parity limit on the axis is 0; k=0 data keeps the genuine 1/r
      out[0] = 0.0;
      return out;
    }

    case Multiplier::Kind::X3: {
      const double ke = X.k_exp;
      for (int i = 0; i < n; ++i) {
        const double r = s.grid.r(i);
        const double x1sq = std::exp(-2.0 * s.gamma[i]) * s.pi[i] * s.pi[i];
        out[i] = std::exp(-ke * s.gamma[i]) * x1sq -
                 ke * a * r * r * std::exp((2.0 - ke) * s.gamma[i]) *
                     (d.e[i] * (d.e[i] - d.fpot[i]) - d.m[i] * d.m[i]);
      }
      return out;
    }

    case Multiplier::Kind::X4: {
      for (int i = 1; i < n; ++i) {
        const double r = s.grid.r(i);
        const double ra1 = std::pow(r, X.a - 1.0);
        const double x1sq = std::exp(-2.0 * s.gamma[i]) * s.pi[i] * s.pi[i];
        const double x2sq = std::exp(-2.0 * s.gamma[i]) * ur[i] * ur[i];
        out[i] = 0.5 * ra1 *
                 ((1.0 + X.a) * x1sq + (X.a - 1.0) * x2sq + (1.0 - X.a) * d.fpot[i]);
      }
      out[0] = 0.0;  // bracket vanishes at the axis for k=1, r^{a-1} notwithstanding
      return out;
    }

    case Multiplier::Kind::Kappa: {
      // div P_kappa = kappa (box u) u + kappa u^nu u_nu - (box kappa) u^2/2,
      // with box u replaced by the source k^2 f f_u / r^2 and box kappa in its
      // Einstein-substituted closed form.
      for (int i = 1; i < n; ++i) {
        const double r = s.grid.r(i);
        const double u = r * s.v[i];
        const double kap = 0.5 * (1.0 - X.a) * std::pow(r, X.a - 1.0);
        const double u_t = std::exp(s.omega[i] - s.gamma[i]) * s.pi[i];
        const double grad2 = -std::exp(-2.0 * s.omega[i]) * u_t * u_t +
                             std::exp(-2.0 * s.gamma[i]) * ur[i] * ur[i];
        const double ffu = target.eval(u).ffu;
        const double box_kappa =
            std::exp(-2.0 * s.gamma[i]) * std::pow(r, X.a - 3.0) * 0.5 *
            sq(1.0 - X.a) *
            (1.0 - X.a + r * r * a * std::exp(2.0 * s.gamma[i]) * d.fpot[i]);
        out[i] = kap * k2 * ffu * u / (r * r) + kap * grad2 - 0.5 * box_kappa * u * u;
      }
      out[0] = 0.0;
      return out;
    }
  }
  return out;
}

std::vector<double> divergence_fd(const History& h, int ti, const Multiplier& X,
                                  const TargetManifold& target) {
  if (ti <= 0 || ti >= h.size() - 1)
    throw BoundaryTime("divergence_fd needs an interior stored time");
  const Slice& s = h.slice(ti);
  const Slice& sm = h.slice(ti - 1);
  const Slice& sp = h.slice(ti + 1);
  const double dt2 = sp.t - sm.t;
  const int n = s.grid.n_points;
  const double dr = s.grid.dr;

  // factor the exact r out of sqrt(-g) = r e^{gamma+Omega}: with V = e^{gamma+Omega}
  // the divergence reads [d_t(V P^t) + d_r(V P^r) + (V P^r)/r] / V, and V P^r is
  // odd so the pointwise division by r is exact at the samples
  auto weighted = [&](const Slice& sl, std::vector<double>& wt, std::vector<double>& wr) {
    const Densities d = compute_densities(sl, target);
    const MomentumField P = momentum(sl, X, d, target);
    wt.resize(n);
    wr.resize(n);
    for (int i = 0; i < n; ++i) {
      const double V = std::exp(sl.gamma[i] + sl.omega[i]);
      wt[i] = V * P.Pt[i];
      wr[i] = V * P.Pr[i];
    }
  };

  std::vector<double> wt_m, wr_m, wt_0, wr_0, wt_p, wr_p;
  weighted(sm, wt_m, wr_m);
  weighted(s, wt_0, wr_0);
  weighted(sp, wt_p, wr_p);

  const auto dwr = radial_derivative(wr_0, dr, Parity::Odd);

  std::vector<double> out(n, 0.0);
  for (int i = 1; i < n; ++i) {
    const double V = std::exp(s.gamma[i] + s.omega[i]);
    out[i] = ((wt_p[i] - wt_m[i]) / dt2 + dwr[i] + wr_0[i] / s.grid.r(i)) / V;
  }
  // axis limit: (1/r) d_r(r q) -> 2 q_r(0) for odd q
  out[0] = ((wt_p[0] - wt_m[0]) / dt2 + 2.0 * dwr[0]) /
           std::exp(s.gamma[0] + s.omega[0]);
  return out;
}

double ConeRegion::r_at(double tq) const {
  if (t.empty()) return 0.0;
  if (tq <= t.front()) return r_cone.front();
  if (tq >= t.back()) return r_cone.back();
  auto it = std::upper_bound(t.begin(), t.end(), tq);
  const size_t j = it - t.begin();
  const double w = (tq - t[j - 1]) / (t[j] - t[j - 1]);
  return r_cone[j - 1] * (1.0 - w) + r_cone[j] * w;
}

ConeRegion cone_trace(const History& h, double t_apex, double lambda) {
  if (h.size() < 2) throw ConeExitsGrid("need at least two stored slices");
  if (t_apex < h.t_begin() || t_apex > h.t_end() + 1e-12)
    throw ConeExitsGrid("apex time outside the stored history");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0,1)");

  ConeRegion cone;
  cone.t_apex = t_apex;
  cone.lambda = lambda;

  const double tick = h.stored_dt();
  const double r_stop = h.grid().r_max - 2.0 * h.grid().dr;

  // integrate backwards: s = t_apex - t, dr/ds = +e^{Omega-gamma}
  auto speed = [&](double s_par, double rr) {
    return h.light_speed(t_apex - s_par, std::min(rr, h.grid().r_max));
  };

  std::vector<double> ts, rs;
  ts.push_back(t_apex);
  rs.push_back(0.0);

  // first partial leg down to the nearest stored time strictly below t_apex
  double tf = h.t_begin() + std::floor((t_apex - h.t_begin()) / tick - 1e-9) * tick;
  if (tf >= t_apex - 1e-12 * tick) tf -= tick;

  double r = 0.0, s = 0.0;
  for (double s_next = t_apex - tf; t_apex - s_next >= h.t_begin() - 1e-12;
       s_next += tick) {
    const double hs = s_next - s;
    const double k1 = speed(s, r);
    const double k2 = speed(s + 0.5 * hs, r + 0.5 * hs * k1);
    const double k3 = speed(s + 0.5 * hs, r + 0.5 * hs * k2);
    const double k4 = speed(s + hs, r + hs * k3);
    r += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = s_next;
    if (r > r_stop) break;  // cone base wider than the grid: stop tracing
    ts.push_back(t_apex - s);
    rs.push_back(r);
  }
  if (ts.size() < 2) throw ConeExitsGrid("cone trace left the grid immediately");

  std::reverse(ts.begin(), ts.end());
  std::reverse(rs.begin(), rs.end());
  cone.t = std::move(ts);
  cone.r_cone = std::move(rs);
  return cone;
}

namespace {
// 2 pi int_0^{rc} q(r) r e^{gamma} dr on a stored slice
double cone_section(const Slice& s, const std::vector<double>& q, double rc) {
  std::vector<double> g(q.size());
  for (size_t i = 0; i < q.size(); ++i)
    g[i] = q[i] * s.grid.r(static_cast<int>(i)) * std::exp(s.gamma[i]);
  return kTwoPi * trapezoid_to(g, s.grid.dr, rc);
}

int cone_index_of(const ConeRegion& cone, const History& h, int ti) {
  const double tq = h.t(ti);
  for (size_t j = 0; j < cone.t.size(); ++j)
    if (std::abs(cone.t[j] - tq) < 1e-9) return static_cast<int>(j);
  throw BoundaryTime("stored time not covered by the cone trace");
}
}  // namespace

double cone_energy(const History& h, const ConeRegion& cone, int ti,
                   const TargetManifold& target) {
  const Slice& s = h.slice(ti);
  const Densities d = compute_densities(s, target);
  const double rc = cone.r_at(s.t);
  return cone_section(s, d.e, rc);
}

double flux(const History& h, const ConeRegion& cone, const Multiplier& X, int i_tau,
            int i_s, const TargetManifold& target, MantleOrientation orient) {
  if (i_tau >= i_s) throw BoundaryTime("flux needs t(i_tau) < t(i_s)");
  cone_index_of(cone, h, i_tau);
  cone_index_of(cone, h, i_s);

  // integrand n~(P) r e^{Omega} on the mantle at each stored time
  std::vector<double> vals(i_s - i_tau + 1), tt(i_s - i_tau + 1);
  for (int ti = i_tau; ti <= i_s; ++ti) {
    const Slice& s = h.slice(ti);
    const Densities d = compute_densities(s, target);
    const MomentumField P = momentum(s, X, d, target);
    const double rc = cone.r_at(s.t);
    const double dr = s.grid.dr;
    const double Pt = interp_radial(P.Pt, dr, rc, Parity::Even);
    const double Pr = interp_radial(P.Pr, dr, rc, Parity::Odd);
    const double eg = std::exp(interp_radial(s.gamma, dr, rc, Parity::Even));
    const double eo = std::exp(interp_radial(s.omega, dr, rc, Parity::Even));
    const double ntilde_P = -eo * Pt - eg * Pr;
    vals[ti - i_tau] = ntilde_P * rc * eo;
    tt[ti - i_tau] = s.t;
  }
  double acc = 0.0;
  for (size_t j = 1; j < vals.size(); ++j)
    acc += 0.5 * (tt[j] - tt[j - 1]) * (vals[j] + vals[j - 1]);
  const double sign = orient == MantleOrientation::Standard ? -1.0 : 1.0;
  return sign * kTwoPi * acc;
}

FluxReport stokes_residual(const History& h, const ConeRegion& cone, const Multiplier& X,
                           int i_tau, int i_s, const TargetManifold& target,
                           MantleOrientation orient) {
  FluxReport rep{};
  rep.flux = flux(h, cone, X, i_tau, i_s, target, orient);

  auto slice_term = [&](int ti) {
    const Slice& s = h.slice(ti);
    const Densities d = compute_densities(s, target);
    const MomentumField P = momentum(s, X, d, target);
    std::vector<double> q(P.Pt.size());
    for (size_t i = 0; i < q.size(); ++i) q[i] = std::exp(s.omega[i]) * P.Pt[i];
    return cone_section(s, q, cone.r_at(s.t));
  };
  rep.slice_lo = slice_term(i_tau);
  rep.slice_hi = slice_term(i_s);

  // bulk: trapezoid in t of the per-slice cone sections of the closed form
  std::vector<double> vals(i_s - i_tau + 1), tt(i_s - i_tau + 1);
  for (int ti = i_tau; ti <= i_s; ++ti) {
    const Slice& s = h.slice(ti);
    const Densities d = compute_densities(s, target);
    const auto div = divergence_bulk(s, X, d, target);
    std::vector<double> q(div.size());
    for (size_t i = 0; i < q.size(); ++i) q[i] = div[i] * std::exp(s.omega[i]);
    vals[ti - i_tau] = cone_section(s, q, cone.r_at(s.t));
    tt[ti - i_tau] = s.t;
  }
  double acc = 0.0;
  for (size_t j = 1; j < vals.size(); ++j)
    acc += 0.5 * (tt[j] - tt[j - 1]) * (vals[j] + vals[j - 1]);
  rep.bulk = acc;
  rep.residual = rep.bulk - (rep.slice_hi - rep.slice_lo + rep.flux);
  return rep;
}

double exterior_energy(const History& h, const ConeRegion& cone, int i_tau,
                       const TargetManifold& target, const NullFrame* frame) {
  const Slice& s = h.slice(i_tau);
  const Densities d = compute_densities(s, target);
  const double r2 = cone.r_at(s.t);
  double r1 = cone.lambda * r2;
  if (frame) {
    // exact R = lambda |T| curve: find r with R(t,r) - lambda |T(t,r)| = 0
    auto val = [&](double rr) {
      const double xi = frame->xi_at(s.t, rr);
      const double eta = frame->eta_at(s.t, rr);
      const double R = 0.5 * (xi - eta), T = 0.5 * (xi + eta);
      return R - cone.lambda * std::abs(T);
    };
    double lo = 0.0, hi = r2;
    if (val(lo) < 0.0 && val(hi) > 0.0) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (val(mid) < 0.0 ? lo : hi) = mid;
      }
      r1 = 0.5 * (lo + hi);
    }
  }
  return cone_section(s, d.e, r2) - cone_section(s, d.e, r1);
}

double kinetic_cone_integral(const History& h, const ConeRegion& cone, int i_tau,
                             const TargetManifold&) {
  const int i_apex_limit = h.size() - 1;
  std::vector<double> vals, tt;
  for (int ti = i_tau; ti <= i_apex_limit; ++ti) {
    const Slice& s = h.slice(ti);
    if (s.t > cone.t_apex + 1e-12) break;
    const double rc = cone.r_at(s.t);
    std::vector<double> q(s.v.size());
    for (size_t i = 0; i < q.size(); ++i) {
      // e^{-2 Omega} u_t^2 = e^{-2 gamma} Pi^2, times the volume weight e^{Omega}
      q[i] = std::exp(-2.0 * s.gamma[i]) * s.pi[i] * s.pi[i] * std::exp(s.omega[i]);
    }
    vals.push_back(cone_section(s, q, rc));
    tt.push_back(s.t);
  }
  double acc = 0.0;
  for (size_t j = 1; j < vals.size(); ++j)
    acc += 0.5 * (tt[j] - tt[j - 1]) * (vals[j] + vals[j - 1]);
  const double rc_tau = cone.r_at(h.t(i_tau));
  return rc_tau > 0.0 ? acc / rc_tau : 0.0;
}

ABState ab_diagnostics(const History& h, const ConeRegion& cone, const NullFrame& frame,
                       const TargetManifold& target) {
  if (frame.nt == 0) throw FrameUnavailable("null frame is empty");

  ABState st;
  const double dr = h.grid().dr;
  const double k2 = sq(static_cast<double>(h.front().k));

  // per-slice tables needed at sample points
  struct Tables {
    std::vector<double> e, m, fpot, gamma, omega, v, ur;
  };
  std::vector<Tables> tabs(h.size());
  for (int i = 0; i < h.size(); ++i) {
    const Slice& s = h.slice(i);
    const Densities d = compute_densities(s, target);
    tabs[i] = {d.e, d.m, d.fpot, s.gamma, s.omega, s.v, s.u_r()};
  }

  auto sample_at = [&](double t, double r) {
    const int i = h.lower_index(t);
    const double w = (t - h.t(i)) / (h.t(i + 1) - h.t(i));
    auto lerp = [&](const std::vector<double>& a, const std::vector<double>& b,
                    Parity p) {
      return interp_radial(a, dr, r, p) * (1.0 - w) + interp_radial(b, dr, r, p) * w;
    };
    ABSample smp{};
    smp.t = t;
    smp.r = r;
    const double e = lerp(tabs[i].e, tabs[i + 1].e, Parity::Even);
    const double m = lerp(tabs[i].m, tabs[i + 1].m, Parity::Even);
    const double fp = lerp(tabs[i].fpot, tabs[i + 1].fpot, Parity::Even);
    const double g = lerp(tabs[i].gamma, tabs[i + 1].gamma, Parity::Even);
    const double O = lerp(tabs[i].omega, tabs[i + 1].omega, Parity::Even);
    const double v = lerp(tabs[i].v, tabs[i + 1].v, Parity::Even);
    const double ur = lerp(tabs[i].ur, tabs[i + 1].ur, Parity::Even);
    const double alpha = h.front().alpha;
    const double u = r * v;

    smp.A2 = r * (e - m);
    smp.B2 = r * (e + m);
    smp.Ahat = std::exp(g) * std::sqrt(std::max(0.0, smp.A2));
    smp.Bhat = std::exp(g) * std::sqrt(std::max(0.0, smp.B2));
    smp.xi = frame.xi_at(t, r);
    smp.eta = frame.eta_at(t, r);

    // L0 = (-(X1 u)^2 + (X2 u)^2 + fpot)/2 - 2 k^2 f f_u u_r / r
    const double x1sq = 2.0 * e - fp - std::exp(-2.0 * g) * ur * ur;  // e0 - (X2u)^2
    const double x2sq = std::exp(-2.0 * g) * ur * ur;
    double ffu_over_u = 1.0;
    if (u != 0.0) ffu_over_u = target.eval(u).ffu / u;
    smp.L0 = 0.5 * (-x1sq + x2sq + fp) - 2.0 * k2 * ffu_over_u * v * ur;
    // Einstein-substituted L = e^Omega L0 + alpha r^2 e^{2 gamma + Omega} ((e-f)^2 - m^2)
    smp.L = std::exp(O) * smp.L0 +
            alpha * r * r * std::exp(2.0 * g + O) * (sq(e - fp) - sq(m));
    smp.Skl = 3.0 * e * fp - fp * fp - m * fp;   // (k_l - 2) term drops at k_l = 2
    smp.Skn = -smp.Skl;                          // k_n = 2
    smp.Hhat = 0.0;
    return smp;
  };

  // fans of characteristics inside the cone, launched from the axis
  const double t_lo = cone.t_min();
  const double t_hi = cone.t_apex;
  const int n_chars = 24;
  const double tick = h.stored_dt();

  for (int c = 0; c < n_chars; ++c) {
    const double t0 = t_lo + (t_hi - t_lo) * c / n_chars;

    // outgoing: forward from (t0, 0) until the mantle
    std::vector<ABSample> out_line;
    {
      double r = 0.0;
      for (double t = t0; t < t_hi - 1e-12; t += tick) {
        const double hs = std::min(tick, t_hi - t);
        if (r > 2.0 * dr) out_line.push_back(sample_at(t, r));
        const double k1 = h.light_speed(t, r);
        const double k2s = h.light_speed(t + 0.5 * hs, r + 0.5 * hs * k1);
        const double k3 = h.light_speed(t + 0.5 * hs, r + 0.5 * hs * k2s);
        const double k4 = h.light_speed(t + hs, r + hs * k3);
        r += hs / 6.0 * (k1 + 2.0 * k2s + 2.0 * k3 + k4);
        if (r >= cone.r_at(t + hs)) break;  // crossed the mantle
      }
    }
    // running sup of sqrt(xi' - eta) Bhat from the mantle end inward
    double run = 0.0;
    for (auto it = out_line.rbegin(); it != out_line.rend(); ++it) {
      const double arg = std::max(0.0, it->xi - it->eta);
      run = std::max(run, std::sqrt(arg) * it->Bhat);
      it->Hhat = run;
    }
    if (!out_line.empty()) st.outgoing.push_back(std::move(out_line));

    // ingoing: backward from (t0, 0) while inside the cone
    std::vector<ABSample> in_line;
    {
      double r = 0.0;
      for (double t = t0; t > t_lo + 1e-12; t -= tick) {
        const double hs = std::min(tick, t - t_lo);
        if (r > 2.0 * dr && r < cone.r_at(t)) in_line.push_back(sample_at(t, r));
        const double k1 = h.light_speed(t, r);
        const double k2s = h.light_speed(t - 0.5 * hs, r + 0.5 * hs * k1);
        const double k3 = h.light_speed(t - 0.5 * hs, r + 0.5 * hs * k2s);
        const double k4 = h.light_speed(t - hs, r + hs * k3);
        r += hs / 6.0 * (k1 + 2.0 * k2s + 2.0 * k3 + k4);
      }
    }
    if (!in_line.empty()) st.ingoing.push_back(std::move(in_line));
  }

  // implied constants of the monitored inequalities
  auto scan_pairs = [&](const std::vector<std::vector<ABSample>>& lines, bool use_xi,
                        double& cst) {
    for (const auto& line : lines) {
      for (size_t j = 1; j < line.size(); ++j) {
        const ABSample& p = line[j - 1];
        const ABSample& q = line[j];
        const double dcoord = use_xi ? (q.xi - p.xi) : (q.eta - p.eta);
        if (std::abs(dcoord) < 1e-12) continue;
        const double deriv = use_xi ? (q.Ahat - p.Ahat) / dcoord
                                    : (q.Bhat - p.Bhat) / dcoord;
        const double rm = 0.5 * (p.r + q.r);
        const double denom = use_xi ? 0.5 * (p.Bhat + q.Bhat) : 0.5 * (p.Ahat + q.Ahat);
        if (denom > 1e-12) cst = std::max(cst, std::abs(deriv) * rm / denom);
      }
    }
  };
  scan_pairs(st.outgoing, true, st.dxi_constant);
  scan_pairs(st.ingoing, false, st.deta_constant);

  for (const auto& group : {st.outgoing, st.ingoing})
    for (const auto& line : group)
      for (const auto& smp : line) {
        const double e2m2 = (smp.A2 / std::max(smp.r, 1e-300)) *
                            (smp.B2 / std::max(smp.r, 1e-300));
        if (e2m2 > 1e-14)
          st.L0sq_constant = std::max(st.L0sq_constant, smp.L0 * smp.L0 / e2m2);
      }
  return st;
}

}  // namespace corot
