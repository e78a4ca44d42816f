#pragma once

#include <string>
#include <vector>

#include "corot/history.hpp"
#include "corot/nullgeom.hpp"
#include "corot/slice.hpp"
#include "corot/target.hpp"

namespace corot {

// Multiplier vector field F(t,r) d_t + G(t,r) d_r, plus the kappa momentum
// which is built from u directly rather than by contracting T.
struct Multiplier {
  enum class Kind { X1, X2, X3, X4, Kappa };
  Kind kind = Kind::X1;
  double a = 0.75;      // exponent for X4 / kappa, strictly inside (1/2, 1)
  double k_exp = 0.0;   // metric exponent for X3; 0 gives the Morawetz r d_r

  static Multiplier X1() { return {Kind::X1, 0.75, 0.0}; }
  static Multiplier X2() { return {Kind::X2, 0.75, 0.0}; }
  static Multiplier X3(double k_exp = 0.0) { return {Kind::X3, 0.75, k_exp}; }
  static Multiplier X4(double a = 0.75);
  static Multiplier Kappa(double a = 0.75);
  static Multiplier by_name(const std::string& name);

  std::string name() const;
  bool is_kappa() const { return kind == Kind::Kappa; }

  // coefficient functions of d_t and d_r (not defined for kappa)
  double Fc(double r, double gamma, double omega) const;
  double Gc(double r, double gamma, double omega) const;
};

// contravariant components; P^theta = 0 for every multiplier here
struct MomentumField {
  std::vector<double> Pt, Pr;
};

MomentumField momentum(const Slice& s, const Multiplier& X, const Densities& d,
                       const TargetManifold& target);

// deformation tensor pi_{mu nu} of the multiplier at stored time ti
// (time derivatives by centered differences of the stored history)
struct DeformationField {
  std::vector<double> tt, tr, rr, thth;
};

DeformationField deformation(const History& h, int ti, const Multiplier& X);

// closed-form divergence with the Einstein constraints substituted:
// X1 -> exactly zero; X3(k_exp=0) -> e^{-2 Omega} u_t^2; X4 and kappa per
// their a-parameter forms. Axis values are the parity limits.
std::vector<double> divergence_bulk(const Slice& s, const Multiplier& X,
                                    const Densities& d, const TargetManifold& target);

// (r e^{gamma+Omega})^{-1} [ d_t(r e^{gamma+Omega} P^t) + d_r(...P^r) ] by
// centered differences; the independent oracle against divergence_bulk.
std::vector<double> divergence_fd(const History& h, int ti, const Multiplier& X,
                                  const TargetManifold& target);

// traced past null cone of the apex (t_apex, r=0): dr/dt = -e^{Omega-gamma}
// integrated backwards with RK4 and interpolated fields
struct ConeRegion {
  double t_apex = 0.0;
  double lambda = 0.5;            // interior/exterior split radius factor
  std::vector<double> t, r_cone;  // samples at stored times, ascending t
  double r_at(double t) const;
  double t_min() const { return t.front(); }
  int sample_count() const { return static_cast<int>(t.size()); }
};

ConeRegion cone_trace(const History& h, double t_apex, double lambda = 0.5);

// Both mantle orientations are implemented; Standard is the one under which
// the X1 Stokes balance closes under refinement (and the X1 flux comes out
// nonpositive). Flipped negates the mantle term.
enum class MantleOrientation { Standard, Flipped };

// E^O(t) = E(t, r_cone(t)) at stored index ti (clipped to the cone samples)
double cone_energy(const History& h, const ConeRegion& cone, int ti,
                   const TargetManifold& target);

// mantle flux of P_X between stored times t(i_tau) <= t(i_s):
//   Flux = -2 pi  int  n~(P_X) r e^{Omega} dt  along the traced curve
double flux(const History& h, const ConeRegion& cone, const Multiplier& X, int i_tau,
            int i_s, const TargetManifold& target,
            MantleOrientation orient = MantleOrientation::Standard);

struct FluxReport {
  double bulk;       // spacetime integral of the closed-form divergence
  double slice_lo;   // int e^{Omega} P^t at t_tau (over the cone section)
  double slice_hi;   // ... at t_s
  double flux;       // mantle term
  double residual;   // bulk - (slice_hi - slice_lo + flux)
};

FluxReport stokes_residual(const History& h, const ConeRegion& cone, const Multiplier& X,
                           int i_tau, int i_s, const TargetManifold& target,
                           MantleOrientation orient = MantleOrientation::Standard);

// energy in the annulus between r1 = lambda * r_cone (or the exact R = lambda|T|
// curve when a frame is supplied) and r2 = r_cone at stored index i_tau
double exterior_energy(const History& h, const ConeRegion& cone, int i_tau,
                       const TargetManifold& target, const NullFrame* frame = nullptr);

// (1 / r_cone(tau)) * int_{K(tau)} e^{-2 Omega} u_t^2  over the truncated cone
double kinetic_cone_integral(const History& h, const ConeRegion& cone, int i_tau,
                             const TargetManifold& target);

// along-characteristic samples of the annulus analysis quantities
struct ABSample {
  double t, r, xi, eta;
  double A2, B2;        // r(e-m), r(e+m)
  double Ahat, Bhat;    // e^gamma A, e^gamma B
  double L, L0;
  double Skl, Skn;      // sign quantities at k_l = k_n = 2
  double Hhat;          // running sup of sqrt(xi'-eta) Bhat (outgoing only)
};

struct ABState {
  std::vector<std::vector<ABSample>> outgoing;  // eta ~ const curves
  std::vector<std::vector<ABSample>> ingoing;   // xi ~ const curves
  // implied constants of the monitored inequalities (reported, not asserted)
  double L0sq_constant = 0.0;    // max L0^2 / (e^2 - m^2)
  double dxi_constant = 0.0;     // max |d_xi Ahat| r / Bhat
  double deta_constant = 0.0;    // max |d_eta Bhat| r / Ahat
};

ABState ab_diagnostics(const History& h, const ConeRegion& cone, const NullFrame& frame,
                       const TargetManifold& target);

}  // namespace corot
