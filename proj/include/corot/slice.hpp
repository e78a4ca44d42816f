#pragma once

#include <optional>
#include <vector>

#include "corot/fd.hpp"
#include "corot/grid.hpp"
#include "corot/target.hpp"

namespace corot {

// One time level of the reduced system in the regularized variables
//   v  = u/r                (even across the axis)
//   Pi = e^{gamma-Omega} u_t (odd across the axis, Pi(t,0)=0)
// together with the metric functions gamma, Omega solved from the constraint
// sweep with gamma(t,0) = Omega(t,0) = 0.
struct Slice {
  double t = 0.0;
  double alpha = 1.0;  // gravitational coupling
  int k = 1;           // homotopy degree (0 or 1)
  RadialGrid grid;
  std::vector<double> v, pi, gamma, omega;

  std::vector<double> u() const;    // u = r v
  std::vector<double> u_r() const;  // u_r = v + r v_r, axis value v(0)
};

// Pointwise matter densities measured in the orthonormal frame.
struct Densities {
  std::vector<double> e;     // energy density
  std::vector<double> m;     // momentum density, |m| <= e
  std::vector<double> e0;    // (X1 u)^2 + (X2 u)^2
  std::vector<double> fpot;  // k^2 f(u)^2 / r^2, axis limit k^2 v(0)^2
};

struct EnergyLedger {
  double t = 0.0;
  double E_total = 0.0;
  std::vector<double> E_ball;  // E(t,r_i), cumulative trapezoid
  std::optional<double> E_cone;
};

Densities compute_densities(const Slice& s, const TargetManifold& target);

EnergyLedger energy(const Slice& s, const Densities& d);

// Sweeps the two first-order constraint ODEs outward from the axis:
//   -w_r     = alpha r [ w (Pi^2 + u_r^2)/2 + f^2/(2 r^2 w) ],  w = e^{-gamma}
//   Omega_r  = alpha r [ (Pi^2 + u_r^2) - e^{2 gamma} f^2/r^2 ] / 2
// Coupled RK4 with cubic midpoint interpolation of the matter terms. Throws
// DeficitAngleExceeded if w reaches zero.
Slice solve_constraints(Slice s, const TargetManifold& target);

// e^{gamma}(1 - alpha E(t,r)/(2 pi)) - 1 pointwise.
std::vector<double> metric_identity_residual(const Slice& s, const EnergyLedger& ledger);

// The two sides of the sup-norm chain
//   |wp(u)| <= sqrt(int f^2 (r e^{-gamma})^{-1} dr) * sqrt(int u_r^2 r e^{-gamma} dr).
struct SupNormChain {
  double lhs_max;      // max_r |wp(u(t,r))|
  double rhs;          // product of the two integral square roots
  double witness_r;    // where the max is attained
  bool holds() const { return lhs_max <= rhs * (1.0 + 1e-10) + 1e-14; }
};

SupNormChain supnorm_chain(const Slice& s, const TargetManifold& target);

}  // namespace corot
