#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/expression.hpp"
#include "tw/fibermap.hpp"

using namespace tw;

TEST_CASE("expression parser") {
  auto e = Expression::parse("-2*log(1 - zeta^2) + 3");
  CHECK(e.evaluate_zeta(0.5) == doctest::Approx(-2 * std::log(0.75) + 3));
  CHECK(e.uses(Expression::zeta));
  CHECK_FALSE(e.uses(Expression::alpha));
  CHECK(Expression::parse("2^3^2").evaluate_zeta(0) == doctest::Approx(512));
  CHECK(Expression::parse("-zeta^2").evaluate_zeta(3) == doctest::Approx(-9));
  CHECK(Expression::parse("exp(x1)*cos(pi)").uses(Expression::x1));
  CHECK_THROWS_AS(Expression::parse("1 +"), InputError);
  CHECK_THROWS_AS(Expression::parse("foo(zeta)"), InputError);
  CHECK_THROWS_AS(Expression::parse("(zeta"), InputError);
  CHECK_THROWS_AS(Expression::parse("log(zeta)").evaluate_zeta(-1), DomainError);
  std::array<Jet, Expression::kVarCount> v;
  const double p[1] = {0.3};
  v.fill(Jet(0.0));
  v[Expression::zeta] = jet_seed(p, 2)[0];
  Jet j = Expression::parse("sin(zeta)^2").evaluate(v);
  CHECK(j.partial_value(0) == doctest::Approx(std::sin(0.6)));
}

TEST_CASE("gauss map") {
  auto sphere = make_profile("sphere");
  for (double z : {-0.7, 0.1, 0.5}) {
    auto n = gauss_map(sphere, z, 0.8);
    auto p = surface_point(sphere, z, 0.8);
    for (int i = 0; i < 3; ++i) CHECK(n[i] == doctest::Approx(p[i]).epsilon(1e-14));
  }
  auto cyl = make_profile("cylinder");
  auto n = gauss_map(cyl, 0.3, 1.2);
  CHECK(n[0] == doctest::Approx(std::cos(1.2)));
  CHECK(n[1] == doctest::Approx(std::sin(1.2)));
  CHECK(n[2] == 0.0);
  auto ch = make_profile("cosh");
  for (double z : {-0.5, 0.2, 0.9}) {
    const double t = 2.1, r = ch.value(z), d = ch.slope(z);
    auto m = gauss_map(ch, z, t);
    Vec3 dt{-r * std::sin(t), r * std::cos(t), 0}, dz{d * std::cos(t), d * std::sin(t), 1};
    CHECK(std::abs(dot(m, dt)) < 1e-12);
    CHECK(std::abs(dot(m, dz)) < 1e-12);
    CHECK(dot(m, m) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gauss_map(sphere, 1.0, 0.0), DomainError);
}

TEST_CASE("closed-form and quadrature branches") {
  auto sphere = make_profile("sphere");
  auto id = solve_phi(sphere, 0.0, +1, Branch::alternate_closed_form);
  for (double z : {-0.8, -0.3, 0.25, 0.9}) {
    CHECK(id.value(z) == doctest::Approx(z).epsilon(1e-14));
    CHECK(id.slope(z) == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto cyl = make_profile("cylinder");
  SolveOptions at0;
  at0.z0 = 0.0;
  auto th = solve_phi(cyl, 0.0, +1, Branch::quadrature, at0);
  for (double z : {-1.5, -0.2, 0.7, 1.9}) {
    CHECK(std::abs(th.value(z) - std::tanh(z)) < 1e-10);
    CHECK(std::abs(th.slope(z) - (1 - std::pow(std::tanh(z), 2))) < 1e-10);
  }
  auto wide = make_profile("wide_cylinder");
  auto flat_map = solve_phi(wide, 0.0, +1, Branch::paper_closed_form);
  CHECK(flat_map.value(0.4) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(conformality_check(wide, flat_map, 20).degenerate_constant);
  CHECK_THROWS_AS(solve_phi(cyl, 1.0, +1, Branch::paper_closed_form), DomainError);
}

TEST_CASE("quadrature maps are conformal and orientation preserving") {
  for (const char* name : {"sphere", "cylinder", "cosh"}) {
    CAPTURE(name);
    auto prof = make_profile(name);
    auto m = solve_phi(prof, 0.2, +1, Branch::quadrature);
    auto rep = conformality_check(prof, m, 100);
    CHECK(rep.max_anisotropy < 1e-6);
    CHECK(rep.orientation_preserving);
    CHECK_FALSE(rep.degenerate_constant);
    CHECK(rep.points_tested + rep.points_skipped == 100);
    auto bad = conformality_check(prof, m.perturbed(0.1), 100);
    CHECK(bad.max_anisotropy > 1e-3);
  }
  auto sphere = make_profile("sphere");
  auto rep = conformality_check(sphere, solve_phi(sphere, 0.0, +1, Branch::alternate_closed_form), 50);
  CHECK(rep.max_anisotropy < 1e-12);
  CHECK(rep.orientation_preserving);
  auto cyl = make_profile("cylinder");
  auto deg = conformality_check(cyl, solve_phi(cyl, 0.0, +1, Branch::paper_closed_form), 40);
  CHECK(deg.degenerate_constant);
  CHECK_FALSE(deg.orientation_preserving);
}

TEST_CASE("Mobius closure of quadrature solutions on the sphere") {
  auto sphere = make_profile("sphere");
  const double c1 = 0.3, c2 = -0.7;
  auto m1 = solve_phi(sphere, c1, +1, Branch::quadrature);
  auto m12 = solve_phi(sphere, c1 + c2, +1, Branch::quadrature);
  const double t = std::tanh(c2);
  for (double z : {-0.9, -0.4, 0.0, 0.35, 0.8}) {
    const double p = m1.value(z);
    CHECK(std::abs(m12.value(z) - (p + t) / (1 + p * t)) < 1e-9);
  }
}

TEST_CASE("completeness classifier") {
  for (double p : {0.0, 0.5}) CHECK(completeness_power_pole(p).verdict == Completeness::incomplete);
  for (double p : {1.0, 1.1, 2.0}) CHECK(completeness_power_pole(p).verdict == Completeness::complete);
  CHECK(completeness_power_pole(0.0).truncated_north ==
        doctest::Approx(std::numbers::pi / 2 - 1e-6).epsilon(1e-9));
  // p = 2: tan(pi/2 - 1e-6) ~ 1e6.
  CHECK(completeness_power_pole(2.0).truncated_north == doctest::Approx(1.0 / std::tan(1e-6)).epsilon(1e-6));

  auto fit = [](const std::string& s) { return completeness_expression(Expression::parse(s)); };
  CHECK(fit("0").verdict == Completeness::incomplete);
  CHECK(fit("-0.5*log(1-zeta^2)").verdict == Completeness::incomplete);
  CHECK(fit("-2*log(1-zeta^2)").verdict == Completeness::complete);
  CHECK(fit("-1.1*log(1-zeta^2)").verdict == Completeness::complete);
  CHECK(fit("-log(1-zeta^2)").verdict == Completeness::inconclusive);
  auto q = fit("-1.5*log(1-zeta^2)");
  CHECK(q.exponent_north == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(q.exponent_south == doctest::Approx(1.5).epsilon(1e-3));
  // Complete at one pole only.
  CHECK(fit("-2*log(1-zeta)").verdict == Completeness::incomplete);
  CHECK_THROWS_AS(fit("-log(zeta^2)"), InputError);
  CHECK_THROWS_AS(fit("x1*zeta"), InputError);
}
