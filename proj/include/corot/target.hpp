#pragma once

#include <functional>
#include <string>
#include <vector>

namespace corot {

// Pointwise evaluation of the generating function and its companions.
struct TargetEval {
  double f;    // f(u)
  double fu;   // f'(u)
  double ffu;  // f(u) f'(u), cancellation-free near u=0
  double wp;   // integral of f from 0 to u
};

// Rotationally symmetric target manifold ds^2 = du^2 + f(u)^2 dphi^2 given by
// its odd generating function f with f(0)=0, f'(0)=1. The cubic remainder
// h(u) = (f(u) f'(u) - u)/u^3 is part of the definition: the wave equation's
// source needs it in a form with the leading u already removed, otherwise the
// axis term f f'/r^2 loses all digits for small u.
struct TargetManifold {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f_u;
  std::function<double(double)> cubic_remainder;
  std::function<double(double)> wp;

  TargetEval eval(double u) const;

  // f(u)/u, smooth through u=0 where it equals f'(0)=1.
  double f_over_u(double u) const;
};

TargetManifold make_flat_target();        // f(u) = u
TargetManifold make_sphere_target();      // f(u) = sin u
TargetManifold make_hyperbolic_target();  // f(u) = sinh u

// f(u) = sum_m c[m] u^(2m+1); requires c[0] = 1.
TargetManifold make_polynomial_target(const std::vector<double>& odd_coeffs);

// Lookup by name: "flat", "sphere", "hyperbolic"; "poly" requires coefficients.
TargetManifold make_target(const std::string& name,
                           const std::vector<double>& odd_coeffs = {});

enum class TargetCondition { GeodesicConvexity, Grillakis, SphereAtInfinity };
enum class ConditionVerdict { Satisfied, Violated, Inconclusive };

struct ConditionReport {
  TargetCondition id;
  ConditionVerdict verdict;
  double witness_u = 0.0;      // where the condition first fails (if it does)
  double witness_value = 0.0;  // the condition expression there
  double u_max = 0.0;
  int n_samples = 0;
  bool heuristic = false;  // sphere_at_infinity can only be certified by sampling
};

// Samples the condition expression on (0, u_max]. geodesic convexity: f f' > 0;
// Grillakis: u f f' + f^2 > 0; sphere_at_infinity: wp(u) exceeds divergence_floor
// at u_max and keeps growing over the last decade of samples.
ConditionReport check_condition(const TargetManifold& target, TargetCondition id,
                                double u_max, int n_samples,
                                double divergence_floor = 10.0);

std::string to_string(TargetCondition id);
std::string to_string(ConditionVerdict v);

}  // namespace corot
