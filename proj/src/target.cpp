#include "corot/target.hpp"

#include <cmath>
#include <stdexcept>

#include "corot/errors.hpp"

namespace corot {

namespace {

// Series for (sin u cos u - u)/u^3 and (sinh u cosh u - u)/u^3. Both come from
// (1/2) sin(2u) = sum_j (-1)^j 4^j u^(2j+1)/(2j+1)!, truncated where the next
// term is below 1e-18 on |u| < 0.25.
double sphere_remainder(double u) {
  const double u2 = u * u;
  if (std::abs(u) < 0.25) {
    return -2.0 / 3.0 +
           u2 * (2.0 / 15.0 +
                 u2 * (-4.0 / 315.0 + u2 * (2.0 / 2835.0 - u2 * (1024.0 / 39916800.0))));
  }
  return (0.5 * std::sin(2.0 * u) - u) / (u * u2);
}

double hyperbolic_remainder(double u) {
  const double u2 = u * u;
  if (std::abs(u) < 0.25) {
    return 2.0 / 3.0 +
           u2 * (2.0 / 15.0 +
                 u2 * (4.0 / 315.0 + u2 * (2.0 / 2835.0 + u2 * (1024.0 / 39916800.0))));
  }
  return (0.5 * std::sinh(2.0 * u) - u) / (u * u2);
}

}  // namespace

TargetEval TargetManifold::eval(double u) const {
  TargetEval out;
  out.f = f(u);
  out.fu = f_u(u);
  out.wp = wp(u);
  if (std::abs(u) < 1e-3)
    out.ffu = u + u * u * u * cubic_remainder(u);
  else
    out.ffu = out.f * out.fu;
  return out;
}

double TargetManifold::f_over_u(double u) const {
  if (u == 0.0) return 1.0;
  return f(u) / u;
}

TargetManifold make_flat_target() {
  TargetManifold t;
  t.name = "flat";
  t.f = [](double u) { return u; };
  t.f_u = [](double) { return 1.0; };
  t.cubic_remainder = [](double) { return 0.0; };
  t.wp = [](double u) { return 0.5 * u * u; };
  return t;
}

TargetManifold make_sphere_target() {
  TargetManifold t;
  t.name = "sphere";
  t.f = [](double u) { return std::sin(u); };
  t.f_u = [](double u) { return std::cos(u); };
  t.cubic_remainder = sphere_remainder;
  t.wp = [](double u) { return 1.0 - std::cos(u); };
  return t;
}

TargetManifold make_hyperbolic_target() {
  TargetManifold t;
  t.name = "hyperbolic";
  t.f = [](double u) { return std::sinh(u); };
  t.f_u = [](double u) { return std::cosh(u); };
  t.cubic_remainder = hyperbolic_remainder;
  t.wp = [](double u) { return std::cosh(u) - 1.0; };
  return t;
}

TargetManifold make_polynomial_target(const std::vector<double>& c) {
  if (c.empty() || c[0] != 1.0)
    throw ConfigError("polynomial target needs odd coefficients with c[0] = 1 (f'(0)=1)");
  const size_t M = c.size();

  // f f' is an odd polynomial; its coefficient of u^(2m+1) is
  // sum_{i+j=m} (2j+1) c_i c_j. The m=0 coefficient is exactly 1, so the
  // cubic remainder starts at m=1 with no cancellation.
  std::vector<double> ffu_coeff(2 * M - 1, 0.0);
  for (size_t i = 0; i < M; ++i)
    for (size_t j = 0; j < M; ++j) ffu_coeff[i + j] += (2.0 * j + 1.0) * c[i] * c[j];

  TargetManifold t;
  t.name = "poly";
  t.f = [c](double u) {
    double acc = 0.0;
    const double u2 = u * u;
    for (size_t m = c.size(); m-- > 0;) acc = acc * u2 + c[m];
    return acc * u;
  };
  t.f_u = [c](double u) {
    double acc = 0.0;
    const double u2 = u * u;
    for (size_t m = c.size(); m-- > 0;) acc = acc * u2 + (2.0 * m + 1.0) * c[m];
    return acc;
  };
  t.cubic_remainder = [ffu_coeff](double u) {
    double acc = 0.0;
    const double u2 = u * u;
    for (size_t m = ffu_coeff.size(); m-- > 1;) acc = acc * u2 + ffu_coeff[m];
    return acc;
  };
  t.wp = [c](double u) {
    double acc = 0.0;
    const double u2 = u * u;
    for (size_t m = c.size(); m-- > 0;) acc = acc * u2 + c[m] / (2.0 * m + 2.0);
    return acc * u2;
  };
  return t;
}

TargetManifold make_target(const std::string& name, const std::vector<double>& coeffs) {
  if (name == "flat") return make_flat_target();
  if (name == "sphere") return make_sphere_target();
  if (name == "hyperbolic") return make_hyperbolic_target();
  if (name == "poly") return make_polynomial_target(coeffs);
  throw ConfigError("unknown target '" + name + "' (flat|sphere|hyperbolic|poly)");
}

ConditionReport check_condition(const TargetManifold& target, TargetCondition id,
                                double u_max, int n_samples, double divergence_floor) {
  if (!(u_max > 0.0)) throw ConfigError("check_condition: u_max must be positive");
  if (n_samples < 16) throw ConfigError("check_condition: need at least 16 samples");

  ConditionReport rep;
  rep.id = id;
  rep.u_max = u_max;
  rep.n_samples = n_samples;

  if (id == TargetCondition::SphereAtInfinity) {
    rep.heuristic = true;
    const double wp_end = target.wp(u_max);
    // growth over the last decade of samples
    bool growing = true;
    const int decade = std::max(2, n_samples / 10);
    double prev = target.wp(u_max * (n_samples - decade) / n_samples);
    for (int i = n_samples - decade + 1; i <= n_samples; ++i) {
      const double w = target.wp(u_max * i / n_samples);
      if (w <= prev) {
        growing = false;
        break;
      }
      prev = w;
    }
    if (wp_end >= divergence_floor && growing) {
      rep.verdict = ConditionVerdict::Satisfied;
    } else if (wp_end < divergence_floor) {
      rep.verdict = ConditionVerdict::Violated;  // wp bounded on the probe range
      rep.witness_u = u_max;
      rep.witness_value = wp_end;
    } else {
      rep.verdict = ConditionVerdict::Inconclusive;
      rep.witness_u = u_max;
      rep.witness_value = wp_end;
    }
    return rep;
  }

  for (int i = 1; i <= n_samples; ++i) {
    const double u = u_max * i / n_samples;
    const TargetEval ev = target.eval(u);
    const double expr = (id == TargetCondition::GeodesicConvexity)
                            ? ev.ffu
                            : u * ev.ffu + ev.f * ev.f;
    if (expr < 0.0) {
      rep.verdict = ConditionVerdict::Violated;
      rep.witness_u = u;
      rep.witness_value = expr;
      return rep;
    }
  }
  rep.verdict = ConditionVerdict::Satisfied;
  return rep;
}

std::string to_string(TargetCondition id) {
  switch (id) {
    case TargetCondition::GeodesicConvexity: return "geodesic_convexity";
    case TargetCondition::Grillakis: return "grillakis";
    case TargetCondition::SphereAtInfinity: return "sphere_at_infinity";
  }
  return "?";
}

std::string to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::Satisfied: return "satisfied";
    case ConditionVerdict::Violated: return "violated";
    case ConditionVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace corot
