#include "corot/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "corot/errors.hpp"

namespace corot {

double InitialDataSpec::support_radius() const {
  switch (family) {
    case Family::CompactBump: return center + width;
    case Family::GaussianBump: return center + 6.0 * width;
    case Family::CustomTable: return table_r.empty() ? 0.0 : table_r.back();
  }
  return 0.0;
}

void EvolutionConfig::validate() const {
  if (k != 0 && k != 1)
    throw ConfigError("homotopy degree k=" + std::to_string(k) +
                      " rejected: u ~ r^k needs a different axis regularization");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0,1]");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
}

std::string to_string(BlowupStatus::Verdict v) {
  switch (v) {
    case BlowupStatus::Verdict::Dispersed: return "dispersed";
    case BlowupStatus::Verdict::Blowup: return "blowup";
    case BlowupStatus::Verdict::DeficitExceeded: return "deficit_exceeded";
    case BlowupStatus::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Slice make_initial_data(const InitialDataSpec& spec, const EvolutionConfig& config) {
  config.validate();
  const int n = config.grid.n_points;
  Slice s;
  s.t = 0.0;
  s.alpha = config.alpha;
  s.k = config.k;
  s.grid = config.grid;
  s.v.assign(n, 0.0);
  s.pi.assign(n, 0.0);

  switch (spec.family) {
    case InitialDataSpec::Family::GaussianBump:
      for (int i = 0; i < n; ++i) {
        const double r = s.grid.r(i);
        // mirrored pair keeps v exactly even across the axis
        s.v[i] = spec.amplitude * (std::exp(-sq((r - spec.center) / spec.width)) +
                                   std::exp(-sq((r + spec.center) / spec.width)));
      }
      break;
    case InitialDataSpec::Family::CompactBump:
      // C^5 polynomial bump: gentle derivatives, support exactly [r0-w, r0+w]
      for (int i = 0; i < n; ++i) {
        const double r = s.grid.r(i);
        for (const double c : {spec.center, -spec.center}) {
          const double x = (r - c) / spec.width;
          if (std::abs(x) < 1.0) {
            const double y = 1.0 - x * x;
            s.v[i] += spec.amplitude * y * y * y * y * y * y;
          }
        }
      }
      break;
    case InitialDataSpec::Family::CustomTable: {
      if (spec.table_r.size() < 2 || spec.table_r.size() != spec.table_v.size() ||
          spec.table_r.size() != spec.table_pi.size())
        throw ConfigError("custom table needs matching r/v/pi columns");
      for (int i = 0; i < n; ++i) {
        const double r = s.grid.r(i);
        auto it = std::upper_bound(spec.table_r.begin(), spec.table_r.end(), r);
        if (it == spec.table_r.begin() || it == spec.table_r.end()) continue;
        const size_t j = it - spec.table_r.begin();
        const double w = (r - spec.table_r[j - 1]) / (spec.table_r[j] - spec.table_r[j - 1]);
        s.v[i] = spec.table_v[j - 1] * (1 - w) + spec.table_v[j] * w;
        s.pi[i] = spec.table_pi[j - 1] * (1 - w) + spec.table_pi[j] * w;
      }
      break;
    }
  }

  if (spec.family != InitialDataSpec::Family::CustomTable && !spec.time_symmetric) {
    // approximate left-mover u = phi(r + t): u_t = u_r, and the metric factors
    // cancel in Pi = e^{gamma-Omega} u_t, so Pi0 = +(u_r)0 drives the pulse
    // toward the axis
    const auto ur = s.u_r();
    for (int i = 0; i < n; ++i) s.pi[i] = ur[i];
    s.pi[0] = 0.0;  // Pi is odd
  }
  s.v[n - 1] = 0.0;
  s.pi[n - 1] = 0.0;

  s = solve_constraints(std::move(s), config.target);
  const auto led = energy(s, compute_densities(s, config.target));
  if (config.alpha * led.E_total / (2.0 * std::numbers::pi) >= 1.0)
    throw DeficitAngleExceeded(0.0, s.grid.r_max);
  return s;
}

void rhs(const Slice& s, const TargetManifold& target, std::vector<double>& dv,
         std::vector<double>& dpi) {
  const int n = s.grid.n_points;
  const double dr = s.grid.dr;
  const double k2 = static_cast<double>(s.k) * s.k;
  dv.assign(n, 0.0);
  dpi.assign(n, 0.0);

  std::vector<double> mu(n), u(n);
  for (int i = 0; i < n; ++i) {
    mu[i] = std::exp(s.omega[i] - s.gamma[i]);
    u[i] = s.grid.r(i) * s.v[i];
  }

  // v_t = e^{Omega-gamma} Pi / r; the axis limit is Pi_r(0) by oddness of Pi
  dv[0] = mu[0] * s.pi[1] / dr;
  for (int i = 1; i < n - 1; ++i) dv[i] = mu[i] * s.pi[i] / s.grid.r(i);

  // half-point fluxes r e^{Omega-gamma} u_r; u[0] = 0 exactly
  std::vector<double> flux(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double rm = (i + 0.5) * dr;
    flux[i] = rm * 0.5 * (mu[i] + mu[i + 1]) * (u[i + 1] - u[i]) / dr;
  }

  for (int i = 1; i < n - 1; ++i) {
    const double r = s.grid.r(i);
    const double lap = (flux[i] - flux[i - 1]) / (dr * r);
    double src = 0.0;
    if (k2 != 0.0)
      src = s.v[i] / r + r * s.v[i] * s.v[i] * s.v[i] * target.cubic_remainder(u[i]);
    dpi[i] = lap - std::exp(s.gamma[i] + s.omega[i]) * k2 * src;
    if (!std::isfinite(dpi[i])) throw NonFiniteField("dPi", s.t, i);
  }
  // dpi[0] = 0 by parity; the outer point is frozen
}

namespace {
void axpy_state(const Slice& base, double c, const std::vector<double>& dv,
                const std::vector<double>& dpi, Slice& out) {
  const int n = base.grid.n_points;
  out.v.resize(n);
  out.pi.resize(n);
  for (int i = 0; i < n - 1; ++i) {
    out.v[i] = base.v[i] + c * dv[i];
    out.pi[i] = base.pi[i] + c * dpi[i];
  }
  // frozen outer boundary
  out.v[n - 1] = base.v[n - 1];
  out.pi[n - 1] = base.pi[n - 1];
}
}  // namespace

Slice step(const Slice& s, double dt, const TargetManifold& target) {
  std::vector<double> k1v, k1p, k2v, k2p, k3v, k3p, k4v, k4p;
  Slice stage = s;

  rhs(s, target, k1v, k1p);
  axpy_state(s, 0.5 * dt, k1v, k1p, stage);
  stage.t = s.t + 0.5 * dt;
  stage = solve_constraints(std::move(stage), target);
  rhs(stage, target, k2v, k2p);

  axpy_state(s, 0.5 * dt, k2v, k2p, stage);
  stage.t = s.t + 0.5 * dt;
  stage = solve_constraints(std::move(stage), target);
  rhs(stage, target, k3v, k3p);

  axpy_state(s, dt, k3v, k3p, stage);
  stage.t = s.t + dt;
  stage = solve_constraints(std::move(stage), target);
  rhs(stage, target, k4v, k4p);

  Slice out = s;
  const int n = s.grid.n_points;
  for (int i = 0; i < n - 1; ++i) {
    out.v[i] = s.v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    out.pi[i] = s.pi[i] + dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
  }
  out.t = s.t + dt;
  return solve_constraints(std::move(out), target);
}

RunResult run(const EvolutionConfig& config, const InitialDataSpec& spec) {
  config.validate();
  Slice s = make_initial_data(spec, config);

  double speed0 = 0.0;
  for (int i = 0; i < config.grid.n_points; ++i)
    speed0 = std::max(speed0, std::exp(s.omega[i] - s.gamma[i]));

  if (!config.skip_domain_check) {
    const double needed = spec.support_radius() + speed0 * config.t_end;
    if (config.grid.r_max < needed)
      throw ConfigError("grid r_max=" + std::to_string(config.grid.r_max) +
                        " too small for domain of dependence (need >= " +
                        std::to_string(needed) + ")");
  }

  const double dt_max = config.cfl * config.grid.dr / speed0;
  const double store_dt = config.store_dt > 0.0 ? config.store_dt : config.t_end / 256.0;
  int store_every = std::max(1, static_cast<int>(std::round(store_dt / dt_max)));
  int n_steps = static_cast<int>(std::ceil(config.t_end / dt_max));
  n_steps = ((n_steps + store_every - 1) / store_every) * store_every;
  const double dt = config.t_end / n_steps;

  RunResult res;
  res.dt = dt;
  res.steps = n_steps;
  res.E0 = energy(s, compute_densities(s, config.target)).E_total;

  const double initial_max_v = *std::max_element(
      s.v.begin(), s.v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });

  double max_abs_v = std::abs(initial_max_v);
  double min_w = 1.0;
  bool deficit = false;
  double t_stop = config.t_end;

  res.history.push(s);
  for (int istep = 1; istep <= n_steps; ++istep) {
    // the CFL precondition, rechecked against the evolving metric
    double speed = 0.0;
    for (int i = 0; i < config.grid.n_points; ++i)
      speed = std::max(speed, std::exp(s.omega[i] - s.gamma[i]));
    if (dt * speed > config.grid.dr) throw CflViolation(s.t, speed, dt, config.grid.dr);

    try {
      s = step(s, dt, config.target);
    } catch (const DeficitAngleExceeded&) {
      deficit = true;
      t_stop = s.t;
      break;
    }
    s.t = istep * dt;  // exact multiples keep stored cadence uniform

    for (int i = 0; i < config.grid.n_points; ++i) {
      max_abs_v = std::max(max_abs_v, std::abs(s.v[i]));
      min_w = std::min(min_w, std::exp(-s.gamma[i]));
    }
    if (istep % store_every == 0) res.history.push(s);

    if (std::abs(initial_max_v) > 0.0 &&
        max_abs_v > config.v_threshold_factor * std::abs(initial_max_v)) {
      t_stop = s.t;
      if (istep % store_every != 0) res.history.push(s);  // keep the spiking state
      break;
    }
  }

  res.status = detect_blowup(res.history, config, config.target, std::abs(initial_max_v),
                             min_w, deficit, t_stop);
  res.status.max_abs_v = max_abs_v;
  res.status.min_w = min_w;
  return res;
}

BlowupStatus detect_blowup(const History& history, const EvolutionConfig& config,
                           const TargetManifold& target, double initial_max_v,
                           double min_w_seen, bool deficit_hit, double t_stop) {
  BlowupStatus st;
  st.t_stop = t_stop;
  st.min_w = min_w_seen;

  const Slice& last = history.back();
  double max_v = 0.0, max_ur = 0.0;
  const auto ur = last.u_r();
  for (size_t i = 0; i < last.v.size(); ++i) {
    max_v = std::max(max_v, std::abs(last.v[i]));
    max_ur = std::max(max_ur, std::abs(ur[i]));
  }
  st.max_abs_v = max_v;
  st.gradient_scale = max_ur > 0.0 ? 1.0 / max_ur : std::numeric_limits<double>::infinity();

  if (deficit_hit) {
    st.verdict = BlowupStatus::Verdict::DeficitExceeded;
    st.detail = "constraint sweep hit the deficit-angle bound";
    return st;
  }

  const auto led0 = energy(history.front(), compute_densities(history.front(), target));
  if (led0.E_total <= 0.0) {
    st.verdict = BlowupStatus::Verdict::Dispersed;
    st.detail = "vacuum";
    return st;
  }

  const bool amplitude_grew = initial_max_v > 0.0 &&
                              max_v > config.v_threshold_factor * initial_max_v;
  const bool gradient_collapsed = st.gradient_scale < 4.0 * config.grid.dr;
  if (amplitude_grew && gradient_collapsed) {
    st.verdict = BlowupStatus::Verdict::Blowup;
    st.detail = "amplitude growth with gradient-scale collapse";
    return st;
  }

  std::vector<double> g(last.v.size());
  const auto d = compute_densities(last, target);
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = d.e[i] * last.grid.r(static_cast<int>(i)) * std::exp(last.gamma[i]);
  const double E_ball =
      2.0 * std::numbers::pi * trapezoid_to(g, last.grid.dr, config.dispersal_ball);
  if (E_ball < config.dispersal_fraction * led0.E_total) {
    st.verdict = BlowupStatus::Verdict::Dispersed;
    st.detail = "central energy below dispersal threshold";
    return st;
  }

  st.verdict = BlowupStatus::Verdict::Inconclusive;
  return st;
}

BisectionResult bisect_critical_amplitude(const InitialDataSpec& proto,
                                          const EvolutionConfig& config, double A_low,
                                          double A_high, double tol) {
  auto probe = [&](double A) {
    InitialDataSpec spec = proto;
    spec.amplitude = A;
    BlowupStatus::Verdict verdict;
    double maxv = 0.0;
    try {
      const RunResult rr = run(config, spec);
      verdict = rr.status.verdict;
      maxv = rr.status.max_abs_v;
    } catch (const DeficitAngleExceeded&) {
      verdict = BlowupStatus::Verdict::DeficitExceeded;
    }
    return BisectionProbe{A, verdict, maxv};
  };

  BisectionResult out;
  out.A_low = A_low;
  out.A_high = A_high;
  if (A_high - A_low < tol) return out;  // bracket already tighter than tol

  const auto lo = probe(A_low);
  const auto hi = probe(A_high);
  out.probes.push_back(lo);
  out.probes.push_back(hi);
  if (lo.verdict != BlowupStatus::Verdict::Dispersed ||
      hi.verdict != BlowupStatus::Verdict::Blowup)
    throw BracketInvalid("bisection bracket invalid: low=" + to_string(lo.verdict) +
                             ", high=" + to_string(hi.verdict),
                         to_string(lo.verdict), to_string(hi.verdict));

  while (out.A_high - out.A_low >= tol) {
    const double mid = 0.5 * (out.A_low + out.A_high);
    const auto p = probe(mid);
    out.probes.push_back(p);
    if (p.verdict == BlowupStatus::Verdict::Dispersed)
      out.A_low = mid;
    else
      out.A_high = mid;
  }
  return out;
}

}  // namespace corot
