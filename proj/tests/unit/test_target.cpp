#include <doctest.h>

#include <cmath>
#include <numbers>

#include "corot/target.hpp"

using namespace corot;

TEST_CASE("flat target eval") {
  const auto t = make_flat_target();
  const auto e = t.eval(2.0);
  CHECK(e.f == doctest::Approx(2.0));
  CHECK(e.fu == doctest::Approx(1.0));
  CHECK(e.ffu == doctest::Approx(2.0));
  CHECK(e.wp == doctest::Approx(2.0));
}

TEST_CASE("sphere normalization and closed form") {
  const auto t = make_sphere_target();
  const auto e0 = t.eval(0.0);
  CHECK(e0.f == 0.0);
  CHECK(e0.fu == 1.0);
  CHECK(e0.ffu == 0.0);
  CHECK(e0.wp == 0.0);

  const auto e3 = t.eval(3.0);
  CHECK(e3.f == doctest::Approx(std::sin(3.0)).epsilon(1e-14));
  CHECK(e3.fu == doctest::Approx(std::cos(3.0)).epsilon(1e-14));
  CHECK(e3.ffu == doctest::Approx(std::sin(3.0) * std::cos(3.0)).epsilon(1e-14));
  CHECK(e3.wp == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-14));
}

TEST_CASE("normalization invariants at the origin") {
  for (const auto& t : {make_flat_target(), make_sphere_target(), make_hyperbolic_target(),
                        make_polynomial_target({1.0, -0.2})}) {
    CHECK(std::abs(t.f(0.0)) < 1e-12);
    CHECK(std::abs(t.f_u(0.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("oddness sampled on a symmetric range") {
  for (const auto& t : {make_sphere_target(), make_hyperbolic_target(),
                        make_polynomial_target({1.0, 0.05, -0.01})}) {
    for (int i = 0; i < 1000; ++i) {
      const double u = -5.0 + 10.0 * i / 999.0;
      CHECK(t.f(-u) == doctest::Approx(-t.f(u)).epsilon(1e-13));
      CHECK(t.f_u(-u) == doctest::Approx(t.f_u(u)).epsilon(1e-13));
    }
  }
}

TEST_CASE("cubic remainder matches the direct quotient away from zero") {
  for (const auto& t : {make_sphere_target(), make_hyperbolic_target(),
                        make_polynomial_target({1.0, 0.3, 0.02})}) {
    for (double u = 1e-3; u < 2.0; u *= 1.7) {
      const double direct = (t.f(u) * t.f_u(u) - u) / (u * u * u);
      CHECK(t.cubic_remainder(u) == doctest::Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("regularized and direct ffu paths agree at the crossover") {
  for (const auto& t : {make_sphere_target(), make_hyperbolic_target()}) {
    const double u = 1e-3;
    const double reg = u + u * u * u * t.cubic_remainder(u);
    const double direct = t.f(u) * t.f_u(u);
    CHECK(reg == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("flat satisfies grillakis") {
  const auto rep = check_condition(make_flat_target(), TargetCondition::Grillakis, 10.0, 4096);
  CHECK(rep.verdict == ConditionVerdict::Satisfied);
}

TEST_CASE("hyperbolic satisfies geodesic convexity") {
  const auto rep = check_condition(make_hyperbolic_target(),
                                   TargetCondition::GeodesicConvexity, 10.0, 4096);
  CHECK(rep.verdict == ConditionVerdict::Satisfied);
}

TEST_CASE("sphere violates grillakis with witness near the tan root") {
  const auto rep = check_condition(make_sphere_target(), TargetCondition::Grillakis,
                                   std::numbers::pi, 4096);
  CHECK(rep.verdict == ConditionVerdict::Violated);
  // u sin u cos u + sin^2 u first turns negative past the root of tan u = -u
  CHECK(rep.witness_u > 0.5 * std::numbers::pi);
  CHECK(rep.witness_u < std::numbers::pi);
  CHECK(rep.witness_value < 0.0);
  // sample value quoted at u = 3
  const double expr3 = 3.0 * std::sin(3.0) * std::cos(3.0) + std::sin(3.0) * std::sin(3.0);
  CHECK(expr3 == doctest::Approx(-0.3988).epsilon(1e-3));
}

TEST_CASE("geodesic convexity implies grillakis on the builtins") {
  for (const auto& t : {make_flat_target(), make_sphere_target(), make_hyperbolic_target()}) {
    const auto geo = check_condition(t, TargetCondition::GeodesicConvexity, 8.0, 2048);
    const auto gri = check_condition(t, TargetCondition::Grillakis, 8.0, 2048);
    if (geo.verdict == ConditionVerdict::Satisfied)
      CHECK(gri.verdict == ConditionVerdict::Satisfied);
  }
}

TEST_CASE("grillakis is strictly weaker than geodesic convexity") {
  // on (0, 2]: sin u cos u < 0 past pi/2 but u sin u cos u + sin^2 u stays positive
  const auto sphere = make_sphere_target();
  const auto geo = check_condition(sphere, TargetCondition::GeodesicConvexity, 2.0, 2048);
  const auto gri = check_condition(sphere, TargetCondition::Grillakis, 2.0, 2048);
  CHECK(geo.verdict == ConditionVerdict::Violated);
  CHECK(gri.verdict == ConditionVerdict::Satisfied);
}

TEST_CASE("sphere at infinity verdicts") {
  CHECK(check_condition(make_flat_target(), TargetCondition::SphereAtInfinity, 10.0, 1024)
            .verdict == ConditionVerdict::Satisfied);
  CHECK(check_condition(make_hyperbolic_target(), TargetCondition::SphereAtInfinity, 10.0,
                        1024)
            .verdict == ConditionVerdict::Satisfied);
  const auto srep =
      check_condition(make_sphere_target(), TargetCondition::SphereAtInfinity, 50.0, 1024);
  CHECK(srep.verdict == ConditionVerdict::Violated);  // wp bounded by 2
  CHECK(srep.heuristic);
}

TEST_CASE("polynomial target requires unit leading coefficient") {
  CHECK_THROWS(make_polynomial_target({2.0}));
  CHECK_THROWS(make_target("poly", {}));
  CHECK_THROWS(make_target("nosuch", {}));
}
