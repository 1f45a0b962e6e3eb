#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/jets.hpp"

using tw::Jet;

namespace {

double d(const Jet& f, std::initializer_list<int> m) {
  std::vector<int> v(m);
  return tw::jet_extract(f, v);
}

Jet random_jet(std::mt19937_64& rng, int n, int order) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p(n);
  for (auto& v : p) v = u(rng);
  auto x = tw::jet_seed(p, order);
  Jet r(u(rng));
  for (int i = 0; i < n; ++i) r += u(rng) * x[i] + u(rng) * x[i] * x[(i + 1) % n];
  return r;
}

}  // namespace

TEST_CASE("jet_seed polynomial exactness") {
  std::array<double, 2> p{0.0, 0.0};
  auto x = tw::jet_seed(p, 2);
  Jet f = x[0] * x[1];
  CHECK(f.coefficient(std::array{1, 1}) == 1.0);
  CHECK(d(f, {2, 0}) == 0.0);
  CHECK(d(f, {0, 2}) == 0.0);
}

TEST_CASE("log and tanh derivatives") {
  std::array<double, 1> one{1.0}, zero{0.0};
  Jet l = tw::log(tw::jet_seed(one, 3)[0]);
  CHECK(d(l, {1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d(l, {2}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d(l, {3}) == doctest::Approx(2.0).epsilon(1e-15));
  Jet t = tw::tanh(tw::jet_seed(zero, 3)[0]);
  CHECK(d(t, {1}) == doctest::Approx(1.0));
  CHECK(std::abs(d(t, {2})) < 1e-15);
  CHECK(d(t, {3}) == doctest::Approx(-2.0));
}

TEST_CASE("jet_extract") {
  std::array<double, 2> p{0.3, -0.2}, o{0.0, 0.0};
  auto x = tw::jet_seed(p, 3);
  CHECK(d(x[0] * x[0], {2, 0}) == 2.0);
  auto y = tw::jet_seed(o, 2);
  CHECK(d(tw::exp(y[0] + y[1]), {1, 1}) == doctest::Approx(1.0));
  CHECK(d(Jet::constant(5.0, 2, 2), {1, 0}) == 0.0);
  CHECK_THROWS_AS(d(x[0], {1, 1, 1}), tw::UsageError);
  CHECK_THROWS_AS(d(x[0], {4, 0}), tw::UsageError);
}

TEST_CASE("order and capacity validation") {
  std::array<double, 6> p{};
  CHECK_NOTHROW(tw::jet_seed(p, 3));
  CHECK_THROWS_AS(tw::jet_seed(p, 4), tw::ConfigurationError);
  std::array<double, 4> q{};
  CHECK_NOTHROW(tw::jet_seed(q, 4));
  CHECK_THROWS_AS(tw::jet_seed(q, 0), tw::ConfigurationError);
}

TEST_CASE("division by a jet with zero constant term is rejected") {
  std::array<double, 1> z{0.0};
  auto x = tw::jet_seed(z, 2);
  CHECK_THROWS_AS(Jet(1.0) / x[0], tw::DomainError);
}

TEST_CASE("ring axioms on random jets") {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Jet a = random_jet(rng, 4, 3), b = random_jet(rng, 4, 3), c = random_jet(rng, 4, 3);
    Jet r1 = (a * b) * c - a * (b * c);
    Jet r2 = a * (b + c) - (a * b + a * c);
    Jet r3 = a * b - b * a;
    for (const Jet* r : {&r1, &r2, &r3})
      for (double v : r->coefficients()) worst = std::max(worst, std::abs(v));
    CHECK((a * b).value() == a.value() * b.value());
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("chain rule on elementary compositions") {
  // f(g(x)) derivatives at x0 against closed forms.
  std::array<double, 1> p{0.4};
  const double x0 = p[0];
  auto x = tw::jet_seed(p, 2)[0];
  struct Case {
    Jet f;
    double d1, d2;
  };
  const double e = std::exp(x0 * x0);
  const double s = std::sin(2 * x0), c = std::cos(2 * x0);
  const Case cases[] = {
      {tw::exp(x * x), 2 * x0 * e, (2 + 4 * x0 * x0) * e},
      {tw::sin(2.0 * x), 2 * c, -4 * s},
      {tw::cos(2.0 * x), -2 * s, -4 * c},
      {tw::log(1.0 + x * x), 2 * x0 / (1 + x0 * x0),
       (2 - 2 * x0 * x0) / std::pow(1 + x0 * x0, 2)},
      {tw::sqrt(1.0 + x), 0.5 / std::sqrt(1 + x0), -0.25 / std::pow(1 + x0, 1.5)},
      {tw::atan(x), 1 / (1 + x0 * x0), -2 * x0 / std::pow(1 + x0 * x0, 2)},
      {tw::tanh(x), 1 - std::pow(std::tanh(x0), 2),
       -2 * std::tanh(x0) * (1 - std::pow(std::tanh(x0), 2))},
      {tw::exp(tw::sin(x)), std::cos(x0) * std::exp(std::sin(x0)),
       (std::cos(x0) * std::cos(x0) - std::sin(x0)) * std::exp(std::sin(x0))},
      {tw::pow(x, 2.5), 2.5 * std::pow(x0, 1.5), 3.75 * std::pow(x0, 0.5)},
      {tw::log(tw::cosh(x)), std::tanh(x0), 1 - std::pow(std::tanh(x0), 2)},
  };
  for (const auto& k : cases) {
    CHECK(d(k.f, {1}) == doctest::Approx(k.d1).epsilon(1e-13));
    CHECK(d(k.f, {2}) == doctest::Approx(k.d2).epsilon(1e-13));
  }
}

TEST_CASE("agreement with central finite differences") {
  auto f = [](auto x, auto y) {
    using std::exp, std::sin, std::sqrt, tw::exp, tw::sin, tw::sqrt;
    return exp(0.3 * x) * sin(x * y + 0.2) / sqrt(2.0 + y * y);
  };
  std::array<double, 2> p{0.7, -0.4};
  auto x = tw::jet_seed(p, 1);
  Jet v = f(x[0], x[1]);
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    auto pp = p, pm = p;
    pp[i] += h;
    pm[i] -= h;
    const double fd = (f(pp[0], pp[1]) - f(pm[0], pm[1])) / (2 * h);
    CHECK(std::abs(v.partial_value(i) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("partial and embedding") {
  std::array<double, 2> p{1.0, 2.0};
  auto x = tw::jet_seed(p, 3);
  Jet f = x[0] * x[0] * x[1];
  Jet fx = f.partial(0);  // 2 x y
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(4.0));
  CHECK(fx.partial_value(1) == doctest::Approx(2.0));
  std::array<int, 2> map{1, 3};
  Jet e = f.embedded(4, map);
  CHECK(e.n_vars() == 4);
  CHECK(e.partial_value(1) == doctest::Approx(4.0));
  CHECK(e.partial_value(3) == doctest::Approx(1.0));
  CHECK(e.partial_value(0) == 0.0);
}
