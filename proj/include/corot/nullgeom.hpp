#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "corot/history.hpp"
#include "corot/target.hpp"

namespace corot {

// Normalized coordinate null frame over the stored history:
//   l = e^F l~,  n = e^G n~,  with [l, n] = 0 and F = G = 0 on the axis.
// F and G are integrated along a fan of in/outgoing characteristics seeded at
// the axis and resampled onto the (stored t, r) grid; xi and eta follow by
// integrating their differentials along grid lines from the apex, where both
// vanish. Coordinates: T = (xi+eta)/2, R = (xi-eta)/2.
struct NullFrame {
  double t_apex = 0.0;
  int nt = 0, nr = 0;
  double dr = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> F, G;       // calF, calG on the grid
  std::vector<std::vector<uint8_t>> covered;   // both fans reach the axis here
  std::vector<std::vector<double>> xi, eta;

  // max of |value| - (lemma bound integral) along the characteristics;
  // nonpositive means the uniform bounds hold sample by sample
  double F_bound_gap = 0.0, G_bound_gap = 0.0;

  // Z is defined by metric reconstruction: e^{2Z} dxi deta must rebuild
  // e^{2 Omega} dt^2 - e^{2 gamma} dr^2. That fixes e^Z = 2 e^{(F+G)/2}.
  // The other closed form seen in the prose, e^Z = (1/4) e^{F+G}, does not
  // reconstruct the metric; the gap is recorded here instead of silently
  // picking one.
  double z_quarter_form_gap = 0.0;

  double z(int ti, int ri) const;
  double T(int ti, int ri) const { return 0.5 * (xi[ti][ri] + eta[ti][ri]); }
  double R(int ti, int ri) const { return 0.5 * (xi[ti][ri] - eta[ti][ri]); }
  bool is_covered(int ti, int ri) const { return covered[ti][ri] != 0; }

  // interpolated xi / eta at (t, r) (bilinear over the stored grid)
  double xi_at(double t, double r) const;
  double eta_at(double t, double r) const;
};

NullFrame integrate_frame(const History& h, double t_apex, const TargetManifold& target,
                          int fan_per_points = 4);

// [l, n] at an interior stored grid point by finite differences of the
// constructed frame; returns the (t, r) components.
std::array<double, 2> commutator_residual(const NullFrame& frame, const History& h,
                                          int ti, int ri);

// dxi integrated along two homotopic staircase paths from the apex; returns
// the largest gap over a sample of interior target points.
double path_independence_residual(const NullFrame& frame, const History& h);

struct JacobianSample {
  std::array<std::array<double, 3>, 3> J, Jinv;
  double det;
};

JacobianSample jacobian(const NullFrame& frame, const History& h, int ti, int ri);

// measured sups of |d_R r|, |d_r R|, |d_T t|, |d_t T| over the covered grid,
// certifying r ~ R and t ~ T
struct Comparability {
  double c1, c2, c3, c4;
};

Comparability comparability(const NullFrame& frame, const History& h);

}  // namespace corot
