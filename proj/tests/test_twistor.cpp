#include <cmath>

#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/sampling.hpp"
#include "tw/twistor.hpp"

using namespace tw;

namespace {

TwistorChart tw_chart(const std::string& name) { return TwistorChart::twistor(make_fixture(name)); }

TwistorChart sm_chart(const std::string& name, const std::string& profile, double perturb = 0.0) {
  auto pr = make_profile(profile);
  auto m = solve_phi(pr, 0.0, 1, Branch::quadrature);
  if (perturb != 0.0) m = m.perturbed(perturb);
  return TwistorChart::modified(make_fixture(name), pr, m);
}

double max_n(const TwistorChart& ch, int count, std::uint64_t seed) {
  double m = 0.0;
  for (const auto& q : ch.sample(count, seed)) m = std::max(m, max_abs(nijenhuis_bracket(ch, q)));
  return m;
}

Vec6 random6(Rng& rng) {
  Vec6 v;
  for (auto& c : v) c = rng.uniform(-1.0, 1.0);
  return v;
}

double h_pair(const TotalSpaceFields& f, const Vec6& a, const Vec6& b) {
  const Mat6 h = values_of(f.h);
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s += h[i][j] * a[i] * b[j];
  return s;
}

}  // namespace

TEST_CASE("twistor chart needs a Kahler base") {
  CHECK_THROWS_AS(tw_chart("hermitian_perturbed"), ConfigurationError);
  CHECK_NOTHROW(tw_chart("burns"));
}

TEST_CASE("K operator") {
  const Mat4 g = identity_matrix<double, 4>();
  Frame fr;
  for (int a = 0; a < 4; ++a) fr.e[a] = Vec4{};
  for (int a = 0; a < 4; ++a) fr.e[a][a] = 1.0;
  const SelfDualBasis b = sd_basis(fr, g);
  const Mat4 k1 = K_operator(g, b, b.s(0));
  CHECK(k1[1][0] == doctest::Approx(1.0));  // K e1 = e2
  CHECK(k1[3][2] == doctest::Approx(1.0));  // K e3 = e4
  const Mat4 I = standard_complex_structure();
  const Mat4 km = K_operator(g, b, -1.0 * b.s(0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(k1[i][j] == doctest::Approx(I[i][j]));
      CHECK(km[i][j] == doctest::Approx(-I[i][j]));
    }
  const Mat4 k2 = K_operator(g, b, b.s(1));
  const Mat4 sq = matmul(k2, k2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(sq[i][j] + (i == j)) < 1e-12);
  CHECK_THROWS_AS(K_operator(g, b, 2.0 * b.s(0)), InputError);
  CHECK_THROWS_AS(K_operator(g, b, b.t(0)), InputError);
}

TEST_CASE("horizontal lifts") {
  auto flat = tw_chart("flat");
  auto f = flat.fields({0.2, -0.1, 0.4, 0.3, 0.5, 1.0});
  const Vec4 X{0.3, -0.7, 0.2, 1.1};
  const Vec6 Xh = horizontal_lift(f, X);
  for (int i = 0; i < 4; ++i) CHECK(Xh[i] == doctest::Approx(X[i]));
  CHECK(Xh[4] == 0.0);
  CHECK(Xh[5] == 0.0);

  for (const char* name : {"eguchi_hanson", "burns"}) {
    auto ch = tw_chart(name);
    Rng rng(9);
    for (const auto& q : ch.sample(20, 4)) {
      auto fq = ch.fields(q);
      Vec4 Y;
      for (auto& c : Y) c = rng.uniform(-1, 1);
      const Vec6 Yh = horizontal_lift(fq, Y);
      for (int i = 0; i < 4; ++i) CHECK(Yh[i] == doctest::Approx(Y[i]));  // pi o lift = Id
      CHECK(std::abs(Yh[4]) < 1e-10);
      double vrow = Yh[5];
      for (int k = 0; k < 4; ++k) vrow += fq.epsilon * fq.beta[k] * Yh[k];
      CHECK(std::abs(vrow) < 1e-10);
    }
  }
}

TEST_CASE("epsilon calibration") {
  auto c = calibrate_epsilon(make_fixture("burns"), 6, 21);
  CHECK(c.calibrated);
  CHECK(c.consistent);
  CHECK(c.epsilon == 1);
  CHECK(c.residual < 1e-6);
  CHECK(c.flipped_residual > 1e-3);
  // The flipped sign breaks integrability on a curved anti-self-dual base.
  auto ch = tw_chart("burns");
  ch.set_epsilon(-1);
  CHECK(max_n(ch, 10, 2) > 1e-3);
  CHECK_THROWS_AS(ch.set_epsilon(0), ConfigurationError);
}

TEST_CASE("J on the vertical fiber") {
  auto flat = tw_chart("flat");
  for (double z : {0.0, 0.5, -0.8}) {
    const Mat6 J = J_field(flat, {0, 0, 0, 0, z, 0.3});
    CHECK(std::abs(J[4][4]) < 1e-14);
    CHECK(J[5][4] == doctest::Approx(-1.0 / (1.0 - z * z)));
  }
  auto burns = tw_chart("burns");
  for (const auto& q : burns.sample(50, 5)) {
    auto r = j_residuals(burns.fields(q));
    CHECK(r.square < 1e-12);
    CHECK(r.compatibility < 1e-9);
    CHECK(r.splitting < 1e-12);
  }
  CHECK_THROWS_AS(flat.fields({0, 0, 0, 0, 0.995, 0}), DomainError);
}

TEST_CASE("Nijenhuis tensor, bracket route") {
  CHECK(max_n(tw_chart("flat"), 20, 1) < 1e-9);
  CHECK(max_n(tw_chart("fubini_study"), 20, 1) > 1e-2);
  CHECK(max_n(sm_chart("eguchi_hanson", "cylinder"), 20, 1) < 1e-6);
  CHECK(max_n(sm_chart("eguchi_hanson", "cylinder", 0.1), 20, 1) > 1e-3);
  auto ch = tw_chart("fubini_study");
  const Tensor6 n = nijenhuis_bracket(ch, ch.sample(1, 8)[0]);
  double asym = 0.0;
  for (int d = 0; d < 6; ++d)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) asym = std::max(asym, std::abs(n[d][a][b] + n[d][b][a]));
  CHECK(asym < 1e-12);
}

TEST_CASE("Nijenhuis tensor, two routes agree") {
  for (const char* name : {"eguchi_hanson", "fubini_study"}) {
    auto ch = tw_chart(name);
    Rng rng(33);
    double largest = 0.0;
    for (const auto& q : ch.sample(20, 6)) {
      auto f = ch.fields(q);
      const Tensor6 n = nijenhuis_bracket(f);
      const DOmega dom(f);
      const Vec6 A = random6(rng), B = random6(rng), C = random6(rng);
      const double r1 = h_pair(f, contract(n, A, B), C);
      const double r2 = dom(A, B, C);
      CHECK(std::abs(r1 - r2) < 1e-6);
      largest = std::max(largest, std::abs(r1));
    }
    if (std::string(name) == "fubini_study") CHECK(largest > 1e-3);
  }
}

TEST_CASE("structure identities") {
  auto flat = tw_chart("flat");
  for (const auto& q : flat.sample(5, 2)) {
    auto r = verify_structure_identities(flat, q, 1);
    for (double v : {r.id1, r.id2, r.id3, r.id4, r.id5, r.horizontal_nijenhuis}) CHECK(v < 1e-12);
  }
  auto eh = tw_chart("eguchi_hanson");
  for (const auto& q : eh.sample(20, 3)) {
    auto r = verify_structure_identities(eh, q, 7);
    for (double v : {r.id1, r.id2, r.id3, r.id4, r.id5}) CHECK(v < 1e-6);
  }
  // Off anti-self-dual fixtures the rho term is live.
  auto fs = tw_chart("fubini_study");
  double id2 = 0.0;
  for (const auto& q : fs.sample(10, 3)) {
    auto r = verify_structure_identities(fs, q, 7);
    CHECK(r.id1 < 1e-9);
    CHECK(r.id3 < 1e-6);
    CHECK(r.id4 < 1e-6);
    CHECK(r.id5 < 1e-6);
    CHECK(r.id2_opposite_sign < 1e-6);
    CHECK(r.horizontal_nijenhuis_opposite_sign < 1e-6);
    id2 = std::max(id2, r.id2);
  }
  CHECK(id2 > 1e-2);
  // Mixed component on a non-holomorphic fiber map.
  auto bad = sm_chart("burns", "cosh", 0.1);
  for (const auto& q : bad.sample(10, 3)) CHECK(verify_structure_identities(bad, q, 2).id5 < 1e-6);
}

TEST_CASE("Omega_h") {
  auto flat = tw_chart("flat");
  OmegaOptions opt;
  opt.h = Expression::parse("-log(1 - zeta^2)");
  const double z = 0.6;
  const Point6 q{0.1, 0.2, -0.3, 0.4, z, 2.0};
  const FormValue om = values_of(omega_h(flat, q, opt));
  std::vector<int> va{4, 5};
  CHECK(om.component(va) == doctest::Approx(-1.0 / (1.0 - z * z)));

  auto eh = tw_chart("eguchi_hanson");
  Rng rng(4);
  for (const auto& p : eh.sample(50, 12)) {
    auto f = eh.fields(p);
    const FormValue o = values_of(omega_h(eh, f, opt));
    const Vec6 v = random6(rng);
    const std::array<Vec6, 2> pair{v, matvec(values_of(f.J), v)};
    CHECK(evaluate_form(o, pair) > 0.0);
  }
  OmegaOptions bad;
  bad.a = 0.0;
  CHECK_THROWS_AS(omega_h(flat, q, bad), InputError);
  OmegaOptions alpha;
  alpha.h = Expression::parse("sin(alpha)");
  CHECK_THROWS_AS(omega_h(flat, q, alpha), InputError);
  CHECK_THROWS_AS(omega_h(sm_chart("flat", "cylinder"), q, opt), UsageError);
}

TEST_CASE("balanced condition") {
  auto run = [](const std::string& name, const std::string& h) {
    auto ch = tw_chart(name);
    OmegaOptions opt;
    opt.h = Expression::parse(h);
    double m = 0.0;
    for (const auto& q : ch.sample(10, 19)) m = std::max(m, balanced_at(ch, q, opt, 1).d_omega2);
    return m;
  };
  CHECK(run("eguchi_hanson", "0") < 1e-7);
  CHECK(run("burns", "-log(1 - zeta^2)") < 1e-7);
  CHECK(run("eguchi_hanson", "x1") > 1e-3);
  CHECK(run("fubini_study", "0") > 1e-3);
  auto flat = tw_chart("flat");
  auto b = balanced_at(flat, {0.1, 0.2, 0.3, 0.4, 0.2, 1.0}, OmegaOptions{}, 3);
  CHECK(b.d_omega2 < 1e-12);
  CHECK(b.d_omega > 1e-2);
  CHECK(b.positivity == doctest::Approx(1.0));
}

TEST_CASE("cone constants") {
  auto flat = tw_chart("flat");
  const Point6 q{0.1, 0.2, 0.3, 0.4, 0.2, 1.0};
  auto c = cone_at(flat, q, 1, 1);
  CHECK(c.c1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(4.0).epsilon(1e-12));
  c = cone_at(flat, q, 2, 1);
  CHECK(c.c1 == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(8.0).epsilon(1e-12));
  auto eh = tw_chart("eguchi_hanson");
  double lo = 1e300, hi = -1e300;
  for (const auto& p : eh.sample(50, 8)) {
    const double v = cone_at(eh, p, 1.5, 0.5).c1;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK((hi - lo) / hi < 1e-6);
  CHECK_THROWS_AS(cone_at(eh, eh.sample(1, 1)[0], -1.0, 1.0), InputError);
}
