#include <doctest.h>

#include <cmath>

#include "corot/evolve.hpp"
#include "corot/fd.hpp"
#include "corot/nullgeom.hpp"

using namespace corot;

namespace {

History minkowski_history(int n, int slices, double t_max) {
  History h;
  for (int k = 0; k <= slices; ++k) {
    Slice s;
    s.alpha = 0.0;
    s.k = 1;
    s.grid = RadialGrid::make(n, 2.0);
    s.v.assign(n, 0.0);
    s.pi.assign(n, 0.0);
    s.gamma.assign(n, 0.0);
    s.omega.assign(n, 0.0);
    s.t = t_max * k / slices;
    h.push(std::move(s));
  }
  return h;
}

RunResult curved_run(int n, double t_end = 1.0) {
  EvolutionConfig ec;
  ec.grid = RadialGrid::make(n, 2.45);
  ec.t_end = t_end;
  ec.alpha = 1.0;
  ec.k = 1;
  ec.target = make_flat_target();
  ec.store_dt = 4.0 * ec.grid.dr;  // cadence refines with the grid
  InitialDataSpec sp;
  sp.family = InitialDataSpec::Family::CompactBump;
  sp.amplitude = 0.5;
  sp.center = 0.4;
  sp.width = 0.9;
  return run(ec, sp);
}

}  // namespace

TEST_CASE("Minkowski limit: F = G = 0 and xi, eta exact") {
  const auto target = make_flat_target();
  const History h = minkowski_history(129, 16, 1.0);
  const NullFrame fr = integrate_frame(h, 1.0, target);
  for (int ti = 0; ti < fr.nt; ++ti)
    for (int ri = 0; ri < fr.nr; ++ri) {
      CHECK(fr.F[ti][ri] == 0.0);
      CHECK(fr.G[ti][ri] == 0.0);
      const double t = fr.times[ti], r = h.grid().r(ri);
      CHECK(fr.xi[ti][ri] == doctest::Approx(0.5 * ((t - 1.0) + r)).epsilon(1e-13));
      CHECK(fr.eta[ti][ri] == doctest::Approx(0.5 * ((t - 1.0) - r)).epsilon(1e-13));
      CHECK(fr.R(ti, ri) == doctest::Approx(0.5 * r).epsilon(1e-13));
      CHECK(fr.T(ti, ri) == doctest::Approx(0.5 * (t - 1.0)).epsilon(1e-13));
    }
  CHECK(fr.F_bound_gap <= 1e-14);
  CHECK(fr.G_bound_gap <= 1e-14);

  // Jacobian constants and det
  const auto js = jacobian(fr, h, 8, 64);
  CHECK(js.J[0][0] == 1.0);
  CHECK(js.J[1][0] == 1.0);
  CHECK(js.J[1][1] == -1.0);
  CHECK(js.det == doctest::Approx(-2.0));
  const auto comp = comparability(fr, h);
  CHECK(comp.c1 == doctest::Approx(2.0));
  CHECK(comp.c2 == doctest::Approx(0.5));
  CHECK(comp.c3 == doctest::Approx(2.0));
  CHECK(comp.c4 == doctest::Approx(0.5));

  // commutator vanishes identically
  const auto c = commutator_residual(fr, h, 8, 64);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);

  CHECK(path_independence_residual(fr, h) < 1e-13);
}

TEST_CASE("degenerate measure identities dxi(n) = deta(l) = 0 from closed forms") {
  const auto target = make_flat_target();
  const auto rr = curved_run(257);
  const auto& h = rr.history;
  const NullFrame fr = integrate_frame(h, 1.0, target);
  for (int ti = 1; ti < fr.nt - 1; ti += 8)
    for (int ri = 1; ri < fr.nr - 1; ri += 16) {
      if (!fr.is_covered(ti, ri)) continue;
      const Slice& s = h.slice(ti);
      const double F = fr.F[ti][ri], G = fr.G[ti][ri];
      // dxi = (1/2)(e^{-F+Omega} dt + e^{-F+gamma} dr); n = e^{G-Omega} d_t - e^{G-gamma} d_r
      const double dxi_n = 0.5 * (std::exp(-F + s.omega[ri]) * std::exp(G - s.omega[ri]) -
                                  std::exp(-F + s.gamma[ri]) * std::exp(G - s.gamma[ri]));
      const double deta_l = 0.5 * (std::exp(-G + s.omega[ri]) * std::exp(F - s.omega[ri]) -
                                   std::exp(-G + s.gamma[ri]) * std::exp(F - s.gamma[ri]));
      CHECK(std::abs(dxi_n) < 1e-10);
      CHECK(std::abs(deta_l) < 1e-10);
    }
}

TEST_CASE("frame values respect the lemma bound integrals on a curved run") {
  const auto target = make_flat_target();
  const auto rr = curved_run(513);
  const NullFrame fr = integrate_frame(rr.history, 1.0, target);
  CHECK(fr.F_bound_gap <= 1e-10);
  CHECK(fr.G_bound_gap <= 1e-10);
  // and the frame is genuinely nontrivial
  double fmax = 0.0;
  for (int ti = 0; ti < fr.nt; ++ti)
    for (int ri = 0; ri < fr.nr; ++ri)
      if (fr.is_covered(ti, ri)) fmax = std::max(fmax, std::abs(fr.F[ti][ri]));
  CHECK(fmax > 1e-3);
}

TEST_CASE("metric reconstruction defines Z; the quarter form does not match") {
  const auto target = make_flat_target();
  const auto rr = curved_run(257);
  const auto& h = rr.history;
  const NullFrame fr = integrate_frame(h, 1.0, target);
  // -e^{2Z} dxi deta rebuilt from closed-form differentials must equal the
  // metric on arbitrary tangent vectors
  for (int ti = 4; ti < fr.nt; ti += 16)
    for (int ri = 8; ri < fr.nr; ri += 32) {
      if (!fr.is_covered(ti, ri)) continue;
      const Slice& s = h.slice(ti);
      const double F = fr.F[ti][ri], G = fr.G[ti][ri];
      const double Z = fr.z(ti, ri);
      const double vt = 0.7, vr = -0.4;
      const double dxi_v = 0.5 * (std::exp(-F + s.omega[ri]) * vt +
                                  std::exp(-F + s.gamma[ri]) * vr);
      const double deta_v = 0.5 * (std::exp(-G + s.omega[ri]) * vt -
                                   std::exp(-G + s.gamma[ri]) * vr);
      const double rebuilt = -std::exp(2.0 * Z) * dxi_v * deta_v;
      const double metric = -std::exp(2.0 * s.omega[ri]) * vt * vt +
                            std::exp(2.0 * s.gamma[ri]) * vr * vr;
      CHECK(rebuilt == doctest::Approx(metric).epsilon(1e-12));
    }
  // e^Z = (1/4) e^{F+G} misses by ~7/4 at F=G=0, reported not resolved
  CHECK(fr.z_quarter_form_gap > 1.0);
}

TEST_CASE("jacobian closed forms invert each other") {
  const auto target = make_flat_target();
  const auto rr = curved_run(257);
  const NullFrame fr = integrate_frame(rr.history, 1.0, target);
  const auto js = jacobian(fr, rr.history, fr.nt / 2, fr.nr / 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double acc = 0.0;
      for (int c = 0; c < 3; ++c) acc += js.J[a][c] * js.Jinv[c][b];
      CHECK(acc == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
    }
  const double F = fr.F[fr.nt / 2][fr.nr / 3], G = fr.G[fr.nt / 2][fr.nr / 3];
  const Slice& s = rr.history.slice(fr.nt / 2);
  CHECK(js.det == doctest::Approx(-2.0 * std::exp(F + G - s.gamma[fr.nr / 3] -
                                                  s.omega[fr.nr / 3])));
}

TEST_CASE("commutator residual: zeroed frame reproduces the tilde-frame bracket") {
  const auto target = make_flat_target();
  // residual against the closed form to stencil order; the prose display
  // carries the opposite overall sign, which would miss by O(1)
  auto worst_at = [&](int n) {
    const auto rr = curved_run(n);
    const auto& h = rr.history;
    NullFrame fr = integrate_frame(h, 1.0, target);
    for (auto& row : fr.F) std::fill(row.begin(), row.end(), 0.0);
    for (auto& row : fr.G) std::fill(row.begin(), row.end(), 0.0);
    const int ti = fr.nt / 2;
    const double dt = fr.times[ti + 1] - fr.times[ti];
    const double dr = fr.dr;
    double worst = 0.0, scale = 0.0;
    for (int ri = 8; ri < fr.nr - 2; ri += 8) {
      const auto c = commutator_residual(fr, h, ti, ri);
      const Slice& s = h.slice(ti);
      const double Omega_r = (s.omega[ri + 1] - s.omega[ri - 1]) / (2.0 * dr);
      const double gamma_t =
          (h.slice(ti + 1).gamma[ri] - h.slice(ti - 1).gamma[ri]) / (2.0 * dt);
      const double w = 2.0 * std::exp(-(s.gamma[ri] + s.omega[ri]));
      worst = std::max(worst, std::abs(c[0] + w * Omega_r));
      worst = std::max(worst, std::abs(c[1] - w * gamma_t));
      scale = std::max({scale, std::abs(w * Omega_r), std::abs(w * gamma_t)});
    }
    return std::pair{worst, scale};
  };
  const auto [w1, s1] = worst_at(257);
  const auto [w2, s2] = worst_at(513);
  CHECK(w1 < 2e-4);
  CHECK(w1 < 0.02 * s1);  // far below the bracket itself
  CHECK(w1 / w2 > 3.0);   // and shrinking at stencil order
  (void)s2;
}

TEST_CASE("commutator residual converges at second order on evolved frames") {
  const auto target = make_flat_target();
  auto residual = [&](int n) {
    const auto rr = curved_run(n);
    const auto& h = rr.history;
    const NullFrame fr = integrate_frame(h, 1.0, target);
    double worst = 0.0;
    for (int ti = fr.nt / 4; ti < 3 * fr.nt / 4; ti += std::max(1, fr.nt / 16))
      for (int ri = 8; ri < fr.nr - 2; ri += std::max(1, fr.nr / 32)) {
        if (!fr.is_covered(ti, ri) || !fr.is_covered(ti, ri + 1) ||
            !fr.is_covered(ti + 1, ri) || !fr.is_covered(ti - 1, ri) ||
            !fr.is_covered(ti, ri - 1))
          continue;
        const auto c = commutator_residual(fr, h, ti, ri);
        worst = std::max({worst, std::abs(c[0]), std::abs(c[1])});
      }
    return worst;
  };
  const double a = residual(257);
  const double b = residual(513);
  CHECK(a / b > 2.8);
  CHECK(a / b < 6.0);
}

TEST_CASE("frame self-convergence under refinement") {
  const auto target = make_flat_target();
  auto frame_at = [&](int n) {
    auto rr = curved_run(n);
    auto fr = integrate_frame(rr.history, 1.0, target);
    return std::pair{std::move(rr), std::move(fr)};
  };
  const auto [r1, f1] = frame_at(257);
  const auto [r2, f2] = frame_at(513);
  const auto [r3, f3] = frame_at(1025);

  // compare F at shared physical points, linear in t between stored slices
  auto F_at = [](const NullFrame& fr, double t, double r) {
    int i = 0;
    while (i + 2 < fr.nt && fr.times[i + 1] <= t) ++i;
    const double w = (t - fr.times[i]) / (fr.times[i + 1] - fr.times[i]);
    const int rj = static_cast<int>(std::round(r / fr.dr));
    if (rj >= fr.nr || !fr.is_covered(i, rj) || !fr.is_covered(i + 1, rj))
      return std::nan("");
    return fr.F[i][rj] * (1.0 - w) + fr.F[i + 1][rj] * w;
  };
  // points well inside both fans: the G fan needs t > r (outgoing chars from
  // the axis), the F fan needs t + r < t_apex (ingoing chars back from it)
  auto diff = [&](const NullFrame& a, const NullFrame& b) {
    double worst = 0.0;
    int used = 0;
    for (double t : {0.45, 0.55, 0.65})
      for (double r : {0.1, 0.2, 0.3}) {
        if (t + r > 0.8 || t - r < 0.2) continue;  // stay well inside both fans
        const double va = F_at(a, t, r), vb = F_at(b, t, r);
        if (std::isnan(va) || std::isnan(vb)) continue;
        worst = std::max(worst, std::abs(va - vb));
        ++used;
      }
    REQUIRE(used >= 4);
    return worst;
  };
  const double d12 = diff(f1, f2);
  const double d23 = diff(f2, f3);
  CHECK(d12 / d23 > 2.0);
}

TEST_CASE("path independence gap shrinks under refinement") {
  const auto target = make_flat_target();
  auto gap = [&](int n) {
    const auto rr = curved_run(n);
    const NullFrame fr = integrate_frame(rr.history, 1.0, target);
    return path_independence_residual(fr, rr.history);
  };
  const double g1 = gap(257), g2 = gap(513);
  CHECK(g1 < 1e-3);
  CHECK(g1 / g2 > 2.0);
}
