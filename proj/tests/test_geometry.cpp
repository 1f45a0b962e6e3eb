#include <cmath>
#include <random>

#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/geometry.hpp"

using namespace tw;

namespace {

ChartDomain unit_box(double r = 2.0) {
  ChartDomain c;
  for (auto& iv : c.box) iv = {-r, r};
  return c;
}

MetricField flat() {
  return metric_from_components("flat", unit_box(), [](const Vec4T<Jet>&) {
    return identity_matrix<Jet, 4>();
  });
}

// Round unit S^4 in stereographic coordinates.
MetricField sphere() {
  return metric_from_components("sphere", unit_box(), [](const Vec4T<Jet>& x) {
    Jet s = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    Jet f = 4.0 / (s * s);
    auto g = zero_matrix<Jet, 4>();
    for (int i = 0; i < 4; ++i) g[i][i] = f;
    return g;
  });
}

MetricField conformal_exp() {
  return metric_from_components("exp", unit_box(), [](const Vec4T<Jet>& x) {
    auto g = zero_matrix<Jet, 4>();
    for (int i = 0; i < 4; ++i) g[i][i] = tw::exp(2.0 * x[0]);
    return g;
  });
}

// Generic non-conformally-flat metric to exercise symmetries.
MetricField lumpy() {
  return metric_from_components("lumpy", unit_box(), [](const Vec4T<Jet>& x) {
    auto g = identity_matrix<Jet, 4>();
    g[0][0] = 2.0 + tw::sin(x[1]) * x[2];
    g[1][1] = 1.5 + 0.3 * x[0] * x[3];
    g[2][2] = tw::exp(0.2 * x[3]);
    g[0][1] = g[1][0] = 0.2 * tw::cos(x[2] + x[3]);
    g[2][3] = g[3][2] = 0.1 * x[0] * x[1];
    g[1][3] = g[3][1] = 0.15 * x[2];
    return g;
  });
}

Point4 random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("christoffel oracles") {
  Point4 x{0.3, -0.2, 0.5, 0.1};
  for (const auto& gk : christoffel(flat(), x))
    CHECK(max_abs(gk) == 0.0);
  auto gm = christoffel(conformal_exp(), x);
  CHECK(gm[0][0][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gm[1][1][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gm[0][1][1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("christoffel metric compatibility") {
  auto m = lumpy();
  Point4 x{0.2, 0.4, -0.3, 0.6};
  auto gj = m.jets(x, 1);
  auto gm = christoffel(m, x);
  auto g = values_of(gj);
  double worst = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double r = gj[i][j].partial_value(k);
        for (int l = 0; l < 4; ++l) r -= gm[l][k][i] * g[l][j] + gm[l][k][j] * g[i][l];
        worst = std::max(worst, std::abs(r));
        CHECK(gm[k][i][j] == gm[k][j][i]);
      }
  CHECK(worst < 1e-13);
}

TEST_CASE("non-SPD metric names the point") {
  auto bad = metric_from_components("bad", unit_box(), [](const Vec4T<Jet>& x) {
    auto g = identity_matrix<Jet, 4>();
    g[0][0] = x[0];
    return g;
  });
  CHECK_THROWS_AS(christoffel(bad, {-0.5, 0, 0, 0}), GeometryError);
  CHECK_THROWS_AS(local_geometry(flat(), {0, 0, 0, 0}, 1), ConfigurationError);
}

TEST_CASE("round sphere curvature") {
  auto m = sphere();
  std::mt19937_64 rng(3);
  for (int n = 0; n < 10; ++n) {
    auto x = random_point(rng, 1.0);
    auto geo = local_geometry(m, x);
    CHECK(geo.scal == doctest::Approx(12.0).epsilon(1e-11));
    auto f = values_of(orthonormal_frame(geo.g));
    auto op = curvature_operator(geo, sd_basis(f, geo.metric()));
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        CHECK(std::abs(op.matrix()[a][b] - (a == b ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("riemann symmetries and curvature operator blocks") {
  auto m = lumpy();
  std::mt19937_64 rng(11);
  for (int n = 0; n < 10; ++n) {
    auto x = random_point(rng, 0.8);
    auto geo = local_geometry(m, x);
    auto r = riemann_symmetry_residuals(geo.r_down);
    CHECK(r.first_pair < 1e-10);
    CHECK(r.second_pair < 1e-10);
    CHECK(r.pair_swap < 1e-10);
    CHECK(r.bianchi < 1e-10);
    auto f = values_of(orthonormal_frame(geo.g));
    auto op = curvature_operator(geo, sd_basis(f, geo.metric()));
    auto pp = op.plus_plus(), mm = op.minus_minus();
    CHECK(pp[0][0] + pp[1][1] + pp[2][2] == doctest::Approx(geo.scal / 4).epsilon(1e-10));
    CHECK(mm[0][0] + mm[1][1] + mm[2][2] == doctest::Approx(geo.scal / 4).epsilon(1e-10));
    auto rp = op.ric0(), rm = op.ric0_lower();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(rp[i][j] - rm[j][i]) < 1e-12);
  }
}

TEST_CASE("two-vector inner product and hodge star") {
  auto g = identity_matrix<double, 4>();
  Frame f;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) f.e[a][i] = a == i ? 1.0 : 0.0;
  auto e12 = TwoVector::wedge(f.e[0], f.e[1]);
  auto e34 = TwoVector::wedge(f.e[2], f.e[3]);
  CHECK(two_vector_inner(g, e12, e12) == doctest::Approx(0.5));
  CHECK(two_vector_inner(g, e12, e34) == 0.0);
  auto sd = sd_basis(f, g);
  CHECK(sd.s(0).c[0][1] == 1.0);
  CHECK(sd.s(0).c[2][3] == 1.0);
  auto star = hodge_star_2(g, +1, e12);
  CHECK(max_abs(star - e34) < 1e-15);

  // Curved metric: orthonormality and duality.
  auto m = lumpy();
  Point4 x{0.1, -0.3, 0.4, 0.2};
  auto gm = m.at(x);
  auto fr = values_of(orthonormal_frame(m.jets(x, 1)));
  CHECK(frame_gram_residual(gm, fr) < 1e-14);
  auto b = sd_basis(fr, gm);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(two_vector_inner(gm, b.b[i], b.b[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    auto s = hodge_star_2(gm, +1, b.b[i]);
    const double sign = i < 3 ? 1.0 : -1.0;
    CHECK(max_abs(s - sign * b.b[i]) < 1e-12);
    CHECK(max_abs(hodge_star_2(gm, +1, s) - b.b[i]) < 1e-12);
  }
  // s_i x s_j = s_k cyclically; K_{s_a} squares to -Id.
  for (int i = 0; i < 3; ++i) {
    auto c = sd_cross(gm, b.s(i), b.s((i + 1) % 3));
    CHECK(max_abs(c - b.s((i + 2) % 3)) < 1e-12);
    auto k = k_endomorphism(gm, b.s(i));
    auto k2 = matmul(k, k);
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) CHECK(std::abs(k2[p][q] + (p == q ? 1.0 : 0.0)) < 1e-12);
  }
  // K_{s1} e1 = e2.
  auto k1 = k_endomorphism(gm, b.s(0));
  auto ke1 = matvec(k1, fr.e[0]);
  for (int i = 0; i < 4; ++i) CHECK(ke1[i] == doctest::Approx(fr.e[1][i]).epsilon(1e-12));
  CHECK_THROWS_AS(sd_basis(fr, identity_matrix<double, 4>()), GeometryError);
}

TEST_CASE("rho duality on a generic metric") {
  auto m = lumpy();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  auto geo = local_geometry(m, {0.2, 0.1, -0.3, 0.4});
  auto g = geo.metric();
  auto b = sd_basis(values_of(orthonormal_frame(geo.g)), g);
  for (int n = 0; n < 20; ++n) {
    Vec3 cv{u(rng), u(rng), u(rng)}, cw{u(rng), u(rng), u(rng)};
    auto v = from_sd_coefficients(b, cv), w = from_sd_coefficients(b, cw);
    TwoVector xi;
    for (int a = 0; a < 6; ++a) xi += u(rng) * b.b[a];
    const double lhs = curvature_pairing(geo, xi, sd_cross(g, v, w));
    const double rhs = two_vector_inner(g, rho_apply(geo, xi, v), w);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}
