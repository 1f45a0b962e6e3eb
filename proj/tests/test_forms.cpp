#include <cmath>

#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/forms.hpp"
#include "tw/sampling.hpp"

using namespace tw;

namespace {

std::vector<Jet> seed6(const Vec<6>& p, int order) { return jet_seed(p, order); }

double comp(const FormValue& f, std::initializer_list<int> idx) {
  std::vector<int> v(idx);
  return f.component(v);
}

Vec<6> unit(int i) {
  Vec<6> e{};
  e[i] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("d(x1 dx2) = dx1 ^ dx2") {
  auto x = seed6({0.3, -0.2, 0.5, 0.1, 0.7, 1.1}, 1);
  FormJet a(1);
  a[1] = x[0];
  auto d = exterior_derivative(a);
  CHECK(comp(d, {0, 1}) == doctest::Approx(1.0));
  CHECK(comp(d, {1, 0}) == doctest::Approx(-1.0));
  for (int i = 0; i < d.size(); ++i)
    if (i != form_index(std::vector<int>{0, 1})) CHECK(d[i] == 0.0);
}

TEST_CASE("d(dzeta ^ dalpha) = 0") {
  FormJet a(2);
  a[form_index(std::vector<int>{4, 5})] = Jet(1.0);
  CHECK(max_abs(exterior_derivative(a)) == 0.0);
}

TEST_CASE("d of a polynomial 2-form against a hand oracle") {
  const Vec<6> p{0.4, -0.3, 0.9, 0.2, 0.6, -1.2};
  auto x = seed6(p, 1);
  FormJet a(2);
  a[form_index(std::vector<int>{1, 3})] = x[0] * x[2];
  a[form_index(std::vector<int>{0, 5})] = sin(x[4]);
  auto d = exterior_derivative(a);
  // x2 dx0^dx1^dx3 - x0 dx1^dx2^dx3 - cos(x4) dx0^dx4^dx5
  CHECK(comp(d, {0, 1, 3}) == doctest::Approx(p[2]).epsilon(1e-14));
  CHECK(comp(d, {1, 2, 3}) == doctest::Approx(-p[0]).epsilon(1e-14));
  CHECK(comp(d, {0, 4, 5}) == doctest::Approx(-std::cos(p[4])).epsilon(1e-14));
  double rest = 0.0;
  for (int i = 0; i < d.size(); ++i) rest += std::abs(d[i]);
  CHECK(rest == doctest::Approx(std::abs(p[2]) + std::abs(p[0]) + std::abs(std::cos(p[4]))));
}

TEST_CASE("d^2 = 0 on random fields") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    Vec<6> p;
    for (auto& c : p) c = rng.uniform(-1, 1);
    auto x = seed6(p, 2);
    for (int deg = 0; deg <= 3; ++deg) {
      FormJet a(deg);
      for (int i = 0; i < a.size(); ++i) {
        const int j = i % 6, k = (i + 2) % 6;
        a[i] = rng.uniform(-1, 1) * x[j] * x[k] + sin(x[(i + 1) % 6]) * rng.uniform(-1, 1);
      }
      auto dd = exterior_derivative(exterior_derivative_jets(a));
      CHECK(max_abs(dd) < 1e-10);
    }
  }
}

TEST_CASE("wedge and evaluation") {
  Vec<6> a{1, 2, 0, 0, 0, 0}, b{0, 1, 3, 0, 0, 0};
  auto w = wedge(one_form(a), one_form(b));
  CHECK(comp(w, {0, 1}) == doctest::Approx(1.0));
  CHECK(comp(w, {0, 2}) == doctest::Approx(3.0));
  CHECK(comp(w, {1, 2}) == doctest::Approx(6.0));
  std::array<Vec<6>, 2> ee{unit(0), unit(1)};
  FormValue e01(2);
  e01[form_index(std::vector<int>{0, 1})] = 1.0;
  CHECK(evaluate_form(e01, ee) == doctest::Approx(1.0));
  std::array<Vec<6>, 2> swapped{unit(1), unit(0)};
  CHECK(evaluate_form(e01, swapped) == doctest::Approx(-1.0));
  // (alpha ^ beta)(u, v) = alpha(u) beta(v) - alpha(v) beta(u)
  Rng rng(3);
  Vec<6> u, v;
  for (auto& c : u) c = rng.uniform(-1, 1);
  for (auto& c : v) c = rng.uniform(-1, 1);
  std::array<Vec<6>, 2> uv{u, v};
  CHECK(evaluate_form(w, uv) == doctest::Approx(dot(a, u) * dot(b, v) - dot(a, v) * dot(b, u)));
  // dx0 ^ ... ^ dx5 on the standard basis.
  FormValue top(0);
  top[0] = 1.0;
  for (int i = 0; i < 6; ++i) top = wedge(top, one_form(unit(i)));
  CHECK(top[0] == doctest::Approx(1.0));
}

TEST_CASE("form degree errors") {
  FormJet top(6);
  CHECK_THROWS_AS(exterior_derivative(top), UsageError);
  FormValue a(4), b(3);
  CHECK_THROWS_AS(wedge(a, b), UsageError);
  CHECK_THROWS_AS(FormValue(7), UsageError);
}
