#pragma once

#include <vector>

#include "corot/history.hpp"
#include "corot/target.hpp"

namespace corot {

// gamma_t - r alpha u_t u_r at stored slice ti, with gamma_t by centered
// differences of the stored history. This is the one Einstein equation the
// constrained scheme never enforces; it should converge to zero at second
// order. Throws BoundaryTime at the first/last stored slice.
std::vector<double> momentum_constraint_residual(const History& h, int ti);

// E_{mu nu} - alpha T_{mu nu} for the four nontrivial components, by finite
// differences of the stored metric. The (t,theta) and (r,theta) components
// vanish identically on both sides. The theta-theta residual needs second
// time derivatives, so ti must have two neighbours on each side... one is
// enough for centered gamma_tt; BoundaryTime otherwise.
struct EinsteinResiduals {
  std::vector<double> tt, tr, rr, thth;
};

EinsteinResiduals einstein_residuals(const History& h, int ti, const TargetManifold& target);

}  // namespace corot
