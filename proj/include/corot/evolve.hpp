#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corot/history.hpp"
#include "corot/slice.hpp"
#include "corot/target.hpp"

namespace corot {

struct InitialDataSpec {
  enum class Family { GaussianBump, CompactBump, CustomTable };
  Family family = Family::CompactBump;
  double amplitude = 0.0;
  double center = 0.5;
  double width = 0.25;
  bool time_symmetric = true;  // else ingoing: Pi0 = -(u_r)0
  // custom table: rows of (r, v, pi) resampled onto the grid
  std::vector<double> table_r, table_v, table_pi;

  // radius beyond which the profile is negligible (exact for the compact bump)
  double support_radius() const;
};

struct EvolutionConfig {
  RadialGrid grid;
  double t_end = 1.0;
  double cfl = 0.5;
  double alpha = 1.0;
  int k = 1;  // 0 or 1; k >= 2 rejected (u ~ r^k needs a different regularization)
  TargetManifold target;
  double store_dt = 0.0;  // output cadence; 0 picks ~256 stored slices

  // blow-up detection knobs
  double v_threshold_factor = 50.0;  // on max|v| growth
  double dispersal_ball = 1.0;       // E(t_end, r<ball) < dispersal_fraction*E0
  double dispersal_fraction = 0.01;

  bool skip_domain_check = false;  // domain-of-dependence sizing guard

  void validate() const;
};

struct BlowupStatus {
  enum class Verdict { Dispersed, Blowup, DeficitExceeded, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  double t_stop = 0.0;
  double max_abs_v = 0.0;
  double min_w = 1.0;          // min over the run of e^{-gamma}
  double gradient_scale = 0.0; // 1/max|u_r| at the end
  std::string detail;
};

std::string to_string(BlowupStatus::Verdict v);

// Fills (v, Pi) from the family, solves the constraints and checks
// alpha E0 / (2 pi) < 1. Throws DeficitAngleExceeded if the data is too
// energetic for the coupling.
Slice make_initial_data(const InitialDataSpec& spec, const EvolutionConfig& config);

// Time derivatives of (v, Pi) on a constraint-consistent slice:
//   dv  = e^{Omega-gamma} Pi / r
//   dPi = (1/r) D_r( r e^{Omega-gamma} u_r ) - e^{gamma+Omega} k^2 f f_u / r^2
// with the source split as v/r + r v^3 h(r v); D_r is the centered
// half-point flux difference. Axis values follow from parity.
void rhs(const Slice& s, const TargetManifold& target, std::vector<double>& dv,
         std::vector<double>& dpi);

// Classical RK4 with a constraint re-solve at every stage. The outer boundary
// stays frozen at v = Pi = 0.
Slice step(const Slice& s, double dt, const TargetManifold& target);

struct RunResult {
  History history;
  BlowupStatus status;
  double E0 = 0.0;
  double dt = 0.0;
  int steps = 0;
};

RunResult run(const EvolutionConfig& config, const InitialDataSpec& spec);

BlowupStatus detect_blowup(const History& history, const EvolutionConfig& config,
                           const TargetManifold& target, double initial_max_v,
                           double min_w_seen, bool deficit_hit, double t_stop);

struct BisectionProbe {
  double amplitude;
  BlowupStatus::Verdict verdict;
  double max_abs_v;
};

struct BisectionResult {
  double A_low, A_high;
  std::vector<BisectionProbe> probes;
};

// Standard bisection on run verdicts. Endpoints must disperse / blow up
// respectively, else BracketInvalid. Verdicts other than Dispersed shrink
// from the high side.
BisectionResult bisect_critical_amplitude(const InitialDataSpec& proto,
                                          const EvolutionConfig& config, double A_low,
                                          double A_high, double tol);

}  // namespace corot
