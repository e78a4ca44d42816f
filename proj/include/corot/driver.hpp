#pragma once

#include <string>
#include <vector>

#include "corot/config.hpp"

namespace corot {

// CLI entry points. Each returns a process exit code:
//   0 success, 2 validation/config error, 3 numerical abort (deficit / CFL).
int cmd_evolve(const RunConfig& cfg);
int cmd_diagnose(const std::string& run_dir, const std::vector<std::string>& multipliers,
                 double apex_time, double lambda);
int cmd_convergence(const RunConfig& cfg, int levels);
int cmd_bisect(const RunConfig& cfg, double A_low, double A_high, double tol);
int cmd_check_target(const std::string& name, const std::vector<double>& coeffs,
                     double u_max, int n_samples);

}  // namespace corot
