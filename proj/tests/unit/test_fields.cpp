#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "corot/evolve.hpp"
#include "corot/slice.hpp"

using namespace corot;

namespace {

Slice blank_slice(int n, double r_max, double alpha = 1.0, int k = 1) {
  Slice s;
  s.alpha = alpha;
  s.k = k;
  s.grid = RadialGrid::make(n, r_max);
  s.v.assign(n, 0.0);
  s.pi.assign(n, 0.0);
  s.gamma.assign(n, 0.0);
  s.omega.assign(n, 0.0);
  return s;
}

}  // namespace

TEST_CASE("vacuum densities vanish") {
  const auto t = make_flat_target();
  auto s = blank_slice(65, 2.0);
  const auto d = compute_densities(s, t);
  for (int i = 0; i < 65; ++i) {
    CHECK(d.e[i] == 0.0);
    CHECK(d.m[i] == 0.0);
  }
}

TEST_CASE("u = r on the flat target gives unit energy density") {
  const auto t = make_flat_target();
  auto s = blank_slice(129, 2.0, 0.0);
  for (auto& v : s.v) v = 1.0;
  const auto d = compute_densities(s, t);
  for (int i = 0; i < 129; ++i) {
    CHECK(d.e[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.m[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("densities against the analytic profile at high resolution") {
  // gaussian v with flat target and frozen flat metric: everything closed-form
  const auto t = make_flat_target();
  const double A = 0.4, sig = 0.7, r0 = 0.8;
  const int n = 16385;  // 8x a 2049-point production grid
  auto s = blank_slice(n, 2.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const double r = s.grid.r(i);
    s.v[i] = A * (std::exp(-sq((r - r0) / sig)) + std::exp(-sq((r + r0) / sig)));
  }
  const auto d = compute_densities(s, t);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = s.grid.r(i);
    auto vf = [&](double rr) {
      return A * (std::exp(-sq((rr - r0) / sig)) + std::exp(-sq((rr + r0) / sig)));
    };
    const double vr = (-2.0 * (r - r0) / (sig * sig)) * A * std::exp(-sq((r - r0) / sig)) +
                      (-2.0 * (r + r0) / (sig * sig)) * A * std::exp(-sq((r + r0) / sig));
    const double ur = vf(r) + r * vr;
    const double e_exact = 0.5 * (ur * ur) + 0.5 * vf(r) * vf(r);
    worst = std::max(worst, std::abs(d.e[i] - e_exact));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("pointwise density identities") {
  const auto t = make_sphere_target();
  auto s = blank_slice(257, 2.0, 1.0);
  for (int i = 0; i < 257; ++i) {
    const double r = s.grid.r(i);
    s.v[i] = 0.3 * std::exp(-sq((r - 0.7) / 0.3)) + 0.3 * std::exp(-sq((r + 0.7) / 0.3));
    s.pi[i] = -0.2 * r * std::exp(-r * r);
  }
  s = solve_constraints(std::move(s), t);
  const auto d = compute_densities(s, t);
  for (int i = 0; i < 257; ++i) {
    CHECK(d.e[i] == doctest::Approx(0.5 * (d.e0[i] + d.fpot[i])).epsilon(1e-12));
    CHECK(std::abs(d.m[i]) <= d.e[i] + 1e-15);
    CHECK(d.fpot[i] >= 0.0);
  }
  // axis limit of the potential term
  CHECK(d.fpot[0] == doctest::Approx(s.v[0] * s.v[0]));
}

TEST_CASE("ledger: zero, linear-exact, and Simpson comparison") {
  const auto t = make_flat_target();
  auto s = blank_slice(129, 1.0, 0.0);
  auto d = compute_densities(s, t);
  auto led = energy(s, d);
  CHECK(led.E_total == 0.0);

  // e * r * e^gamma == r: trapezoid is exact on linear integrands
  for (auto& v : s.v) v = 1.0;
  d = compute_densities(s, t);
  led = energy(s, d);
  CHECK(led.E_total == doctest::Approx(2.0 * std::numbers::pi * 0.5).epsilon(1e-13));
  for (int i = 0; i < 129; ++i) {
    CHECK(led.E_ball[i] ==
          doctest::Approx(std::numbers::pi * sq(s.grid.r(i))).epsilon(1e-12));
    if (i) CHECK(led.E_ball[i] >= led.E_ball[i - 1]);
  }

  // generic bump vs Simpson at the same resolution: O(dr^2) difference
  const int n = 257;
  auto s2 = blank_slice(n, 2.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const double r = s2.grid.r(i);
    s2.v[i] = 0.5 * std::exp(-sq((r - 0.6) / 0.4));
  }
  const auto d2 = compute_densities(s2, t);
  const auto led2 = energy(s2, d2);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = d2.e[i] * s2.grid.r(i);
  // Simpson over the same samples
  double simp = 0.0;
  for (int i = 0; i + 2 < n; i += 2)
    simp += s2.grid.dr / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
  simp *= 2.0 * std::numbers::pi;
  CHECK(led2.E_total == doctest::Approx(simp).epsilon(5e-5));
}

TEST_CASE("constraints: decoupled and vacuum limits") {
  const auto t = make_flat_target();
  auto s = blank_slice(65, 1.0, 0.0);
  for (int i = 0; i < 65; ++i) s.v[i] = 0.4 * std::exp(-sq(s.grid.r(i)));
  s = solve_constraints(std::move(s), t);
  for (double g : s.gamma) CHECK(g == 0.0);
  for (double w : s.omega) CHECK(w == 0.0);

  auto s2 = blank_slice(65, 1.0, 1.0);
  s2 = solve_constraints(std::move(s2), t);
  for (double g : s2.gamma) CHECK(g == 0.0);
  for (double w : s2.omega) CHECK(w == 0.0);
}

TEST_CASE("constraints: manufactured w = 1/(1+r^2) recovered at fourth order") {
  // With v = 0 and Pi^2 = 4/(alpha (1+r^2)) the exact solution is
  // w = 1/(1+r^2), Omega = log(1+r^2).
  const auto t = make_flat_target();
  const double alpha = 0.8;
  auto solve_err = [&](int n) {
    auto s = blank_slice(n, 1.0, alpha);
    for (int i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      s.pi[i] = 2.0 / std::sqrt(alpha * (1.0 + r * r));
    }
    s = solve_constraints(std::move(s), t);
    double worst_w = 0.0, worst_O = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      worst_w = std::max(worst_w,
                         std::abs(std::exp(-s.gamma[i]) - 1.0 / (1.0 + r * r)));
      worst_O = std::max(worst_O, std::abs(s.omega[i] - std::log(1.0 + r * r)));
    }
    return std::max(worst_w, worst_O);
  };
  const double e1 = solve_err(65);
  const double e2 = solve_err(129);
  CHECK(e1 < 1e-7);
  CHECK(e1 / e2 > 12.0);  // ~16 for a fourth-order sweep
}

TEST_CASE("deficit angle abort") {
  const auto t = make_flat_target();
  auto s = blank_slice(129, 1.0, 100.0);
  for (int i = 0; i < 129; ++i) s.pi[i] = 2.0;
  CHECK_THROWS_AS((void)solve_constraints(std::move(s), t), DeficitAngleExceeded);
}

TEST_CASE("metric identity residual vanishes when decoupled") {
  const auto t = make_flat_target();
  auto s = blank_slice(65, 1.0, 0.0);
  for (int i = 0; i < 65; ++i) s.v[i] = 0.3 * std::exp(-sq(s.grid.r(i)));
  s = solve_constraints(std::move(s), t);
  const auto led = energy(s, compute_densities(s, t));
  for (double r : metric_identity_residual(s, led)) CHECK(r == 0.0);
}

TEST_CASE("metric identity residual shrinks at second order") {
  const auto t = make_flat_target();
  auto resid = [&](int n) {
    auto s = blank_slice(n, 2.0, 1.0);
    for (int i = 0; i < n; ++i) {
      const double r = s.grid.r(i);
      s.v[i] = 0.25 * (std::exp(-sq((r - 0.6) / 0.35)) + std::exp(-sq((r + 0.6) / 0.35)));
    }
    s = solve_constraints(std::move(s), t);
    const auto led = energy(s, compute_densities(s, t));
    double worst = 0.0;
    for (double x : metric_identity_residual(s, led)) worst = std::max(worst, std::abs(x));
    // uniform bound checks
    const double bound = 1.0 / (1.0 - s.alpha * led.E_total / (2.0 * std::numbers::pi));
    for (double g : s.gamma) {
      CHECK(std::exp(g) >= 1.0 - 1e-12);
      CHECK(std::exp(g) <= bound * (1.0 + 2e-6));
    }
    return worst;
  };
  const double a = resid(513), b = resid(1025);
  CHECK(a / b > 3.5);
  CHECK(b < 1e-6);
}

TEST_CASE("ledger stays monotone and |m| <= e across an evolved run") {
  // quantified over all stored slices of a run
  EvolutionConfig ec;
  ec.grid = RadialGrid::make(257, 2.2);
  ec.t_end = 0.5;
  ec.alpha = 1.0;
  ec.k = 1;
  ec.target = make_flat_target();
  InitialDataSpec sp;
  sp.family = InitialDataSpec::Family::CompactBump;
  sp.amplitude = 0.4;
  sp.center = 0.5;
  sp.width = 0.6;
  const auto rr = run(ec, sp);
  for (int ti = 0; ti < rr.history.size(); ++ti) {
    const Slice& s = rr.history.slice(ti);
    const auto d = compute_densities(s, ec.target);
    const auto led = energy(s, d);
    for (int i = 0; i < 257; ++i) {
      CHECK(std::abs(d.m[i]) <= d.e[i] + 1e-15);
      if (i) {
        CHECK(led.E_ball[i] >= led.E_ball[i - 1] - 1e-12 * std::max(1.0, led.E_total));
        CHECK(s.gamma[i] >= s.gamma[i - 1] - 1e-14);  // nondecreasing for alpha >= 0
      }
    }
    CHECK(led.E_ball.back() == led.E_total);
  }
}

TEST_CASE("supnorm chain holds on a constrained slice") {
  const auto t = make_sphere_target();
  auto s = blank_slice(513, 2.0, 1.0);
  for (int i = 0; i < 513; ++i) {
    const double r = s.grid.r(i);
    s.v[i] = 0.4 * (std::exp(-sq((r - 0.5) / 0.3)) + std::exp(-sq((r + 0.5) / 0.3)));
  }
  s = solve_constraints(std::move(s), t);
  const auto chain = supnorm_chain(s, t);
  CHECK(chain.holds());
  CHECK(chain.rhs > 0.0);
}
