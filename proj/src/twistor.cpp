#include "tw/twistor.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tw/sampling.hpp"

namespace tw {

namespace {

constexpr std::array<int, 4> kBaseVars{0, 1, 2, 3};

Jet embed(const Jet& j) { return j.is_scalar() ? j : j.embedded(6, kBaseVars); }

// f'(u) as a jet, for f given on jets of one variable.
Jet derivative_jet(const std::function<Jet(const Jet&)>& f, const Jet& u) {
  const int n = u.order();
  const double p[1] = {u.value()};
  const Jet d = f(jet_seed(p, n + 1)[0]).partial(0);
  std::vector<double> taylor(d.coefficients().begin(), d.coefficients().end());
  return compose(u, taylor);
}

using V3J = VecT<Jet, 3>;

V3J partial3(const std::array<Jet, 3>& v, int var) {
  return {v[0].partial(var), v[1].partial(var), v[2].partial(var)};
}

template <class T>
TwoVectorT<T> fiber_two_vector_t(const SelfDualBasisT<T>& b, const VecT<T, 3>& v) {
  return v[2] * b.s(0) + v[0] * b.s(1) + v[1] * b.s(2);
}

std::string where6(const Point6& q) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < 6; ++i) os << (i ? ", " : "") << q[i];
  os << ")";
  return os.str();
}

Point4 base_point(const Point6& q) { return {q[0], q[1], q[2], q[3]}; }

// Christoffel symbols of a 6x6 metric given as order >= 1 jets.
std::array<Mat6, 6> christoffel6(const Mat6T<Jet>& h) {
  const Mat6 hv = values_of(h);
  const Mat6 hi = inverse(hv);
  std::array<Mat6, 6> dh{};  // dh[k][i][j] = d_k h_ij
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) dh[k][i][j] = h[i][j].partial_value(k);
  std::array<Mat6, 6> gamma{};
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int l = 0; l < 6; ++l) s += hi[k][l] * (dh[i][l][j] + dh[j][l][i] - dh[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
      }
  return gamma;
}

Vec6 gamma_contract(const std::array<Mat6, 6>& gm, const Vec6& a, const Vec6& b) {
  Vec6 r{};
  for (int c = 0; c < 6; ++c)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) r[c] += gm[c][i][j] * a[i] * b[j];
  return r;
}

double dot6(const Mat6& h, const Vec6& a, const Vec6& b) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s += h[i][j] * a[i] * b[j];
  return s;
}

Vec6 vertical6(double a, double b) { return {0, 0, 0, 0, a, b}; }

double max_abs3(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace

TwistorChart::TwistorChart(HermitianSurface base, std::optional<SurfaceProfile> profile,
                           std::optional<EquivariantMap> map)
    : base_(std::move(base)), profile_(std::move(profile)), map_(std::move(map)) {
  if (!base_.from_potential())
    throw ConfigurationError("twistor chart over '" + base_.name() +
                             "': the base must be Kahler (given by a potential)");
}

TwistorChart TwistorChart::twistor(HermitianSurface base) {
  return TwistorChart(std::move(base), std::nullopt, std::nullopt);
}

TwistorChart TwistorChart::modified(HermitianSurface base, SurfaceProfile profile,
                                    EquivariantMap map) {
  return TwistorChart(std::move(base), std::move(profile), std::move(map));
}

void TwistorChart::set_epsilon(int eps) {
  if (eps != 1 && eps != -1) throw ConfigurationError("epsilon must be +1 or -1");
  epsilon_ = eps;
}

std::string TwistorChart::description() const {
  if (!is_modified()) return "Tw(" + base_.name() + ")";
  return "S(" + base_.name() + "; " + profile_->name + ", " + map_->label() + ")";
}

std::array<Jet, 3> TwistorChart::fiber_point(const Jet& u, const Jet& v) const {
  if (!is_modified()) {
    const Jet r = sqrt(1.0 - u * u);
    return {r * cos(v), r * sin(v), u};
  }
  const Jet r = profile_->rho(u);
  return {r * cos(v), r * sin(v), u};
}

std::array<Jet, 3> TwistorChart::fiber_normal(const Jet& u, const Jet& v) const {
  if (!is_modified()) return fiber_point(u, v);
  const Jet d = derivative_jet(profile_->rho, u);
  const Jet n = 1.0 / sqrt(1.0 + d * d);
  return {cos(v) * n, sin(v) * n, -1.0 * d * n};
}

std::array<Jet, 3> TwistorChart::fiber_target(const Jet& u, const Jet& v) const {
  if (!is_modified()) return fiber_point(u, v);
  const Jet phi = map_->phi(u);
  const Jet r = sqrt(1.0 - phi * phi);
  return {r * cos(v), r * sin(v), phi};
}

bool TwistorChart::admits(const Point6& q) const {
  if (!base_.chart().admits(base_point(q))) return false;
  if (!is_modified()) return std::abs(q[4]) < 1.0 - kZetaMargin;
  const double w = profile_->z_max - profile_->z_min;
  if (!(q[4] > profile_->z_min + 0.01 * w && q[4] < profile_->z_max - 0.01 * w)) return false;
  try {
    return std::abs(map_->value(q[4])) < 1.0 - kPoleMargin;
  } catch (const DomainError&) {
    return false;
  }
}

std::vector<Point6> TwistorChart::sample(int count, std::uint64_t seed) const {
  if (count < 0) throw ConfigurationError("sample count must be non-negative");
  Rng rng(seed);
  std::vector<Point6> pts;
  long attempts = 0;
  const auto& box = base_.chart().box;
  double ulo = -1.0 + kZetaMargin, uhi = 1.0 - kZetaMargin;
  if (is_modified()) {
    ulo = profile_->z_min;
    uhi = profile_->z_max;
  }
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > 1000L * (count + 10))
      throw NumericError("rejection sampling found too few admissible total-space points");
    Point6 q;
    for (int i = 0; i < 4; ++i) q[i] = rng.uniform(box[i][0], box[i][1]);
    q[4] = rng.uniform(ulo, uhi);
    q[5] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    if (admits(q)) pts.push_back(q);
  }
  return pts;
}

TotalSpaceFields TwistorChart::fields(const Point6& q) const {
  if (!is_modified()) {
    if (!(std::abs(q[4]) < 1.0 - kZetaMargin))
      throw DomainError("fiber point within the pole margin at " + where6(q));
  } else {
    if (!profile_->interior(q[4])) throw DomainError("fiber coordinate outside the profile at " + where6(q));
    if (!(std::abs(map_->value(q[4])) < 1.0 - kPoleMargin))
      throw DomainError("fiber map within the pole margin at " + where6(q));
  }
  const Point4 x = base_point(q);
  TotalSpaceFields f;
  f.q = q;
  f.epsilon = epsilon_;

  const Mat4T<Jet> g4 = base_.metric().jets(x, 1);
  f.g = values_of(g4);
  if (!is_positive_definite(f.g))
    throw GeometryError("base metric is not positive definite at " + where6(q));
  const auto basis4 = sd_basis_unchecked(adapted_frame<Jet>(g4));
  f.basis = values_of(basis4);
  const auto beta4 = beta_form(base_, x, 2);

  Mat4T<Jet> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = embed(g4[i][j]);
  SelfDualBasisT<Jet> basis;
  for (int a = 0; a < 6; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) basis.b[a].c[i][j] = embed(basis4.b[a].c[i][j]);
  Vec4T<Jet> beta;
  for (int k = 0; k < 4; ++k) {
    beta[k] = embed(beta4[k]);
    f.beta[k] = beta4[k].value();
    for (int l = 0; l < 4; ++l) f.dbeta[k][l] = beta4[k].partial_value(l);
  }

  const Jet u = Jet::variable(q[4], 4, 6, 2);
  const Jet v = Jet::variable(q[5], 5, 6, 2);
  const auto P = fiber_point(u, v);
  const auto N = fiber_normal(u, v);
  const auto F = fiber_target(u, v);
  const V3J Pu = partial3(P, 4), Pv = partial3(P, 5);
  const V3J Nj{N[0].truncated(1), N[1].truncated(1), N[2].truncated(1)};
  const V3J Fj{F[0].truncated(1), F[1].truncated(1), F[2].truncated(1)};
  for (int i = 0; i < 3; ++i) {
    f.P[i] = P[i].value();
    f.normal[i] = N[i].value();
    f.F[i] = F[i].value();
    f.dP_u[i] = Pu[i].value();
    f.dP_v[i] = Pv[i].value();
  }

  // Fiber metric and vertical J in (u, v) coordinates.
  MatT<Jet, 2> G;
  G[0][0] = dot(Pu, Pu);
  G[0][1] = G[1][0] = dot(Pu, Pv);
  G[1][1] = dot(Pv, Pv);
  const Jet det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
  MatT<Jet, 2> Jf;
  const std::array<V3J, 2> dP{Pu, Pv};
  for (int a = 0; a < 2; ++a) {
    const V3J w = cross(Nj, dP[a]);
    const Jet r0 = dot(Pu, w), r1 = dot(Pv, w);
    Jf[0][a] = (G[1][1] * r0 - G[0][1] * r1) / det;
    Jf[1][a] = (G[0][0] * r1 - G[1][0] * r0) / det;
  }

  const TwoVectorT<Jet> F2 = fiber_two_vector_t(basis, Fj);
  const Mat4T<Jet> K = k_endomorphism(g, F2);
  f.K = values_of(K);
  f.g_jet = g;
  f.K_jet = K;
  f.beta_jet = beta;
  f.u = u.truncated(1);
  f.v = v.truncated(1);

  const double eps = epsilon_;
  auto C = identity_matrix<Jet, 6>();
  auto B = identity_matrix<Jet, 6>();
  for (int k = 0; k < 4; ++k) {
    C[5][k] = eps * beta[k];
    B[5][k] = -eps * beta[k];
  }
  auto blockG = zero_matrix<Jet, 6>();
  auto blockJ = zero_matrix<Jet, 6>();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      blockG[i][j] = g[i][j];
      blockJ[i][j] = K[i][j];
    }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      blockG[4 + a][4 + b] = G[a][b];
      blockJ[4 + a][4 + b] = Jf[a][b];
    }
  f.h = matmul(transpose(C), matmul(blockG, C));
  f.J = matmul(B, matmul(blockJ, C));
  f.coframe = values_of(C);
  f.lift = values_of(B);
  return f;
}

Mat4 K_operator(const Mat4& g, const SelfDualBasis& basis, const TwoVector& a) {
  const double n = two_vector_inner(g, a, a);
  if (std::abs(n - 1.0) > 1e-8) throw InputError("K_operator needs a unit 2-vector");
  double asd = 0.0;
  for (int i = 0; i < 3; ++i) asd = std::max(asd, std::abs(two_vector_inner(g, a, basis.t(i))));
  if (asd > 1e-8) throw InputError("K_operator needs a self-dual 2-vector");
  return k_endomorphism(g, a);
}

Vec6 horizontal_lift(const TotalSpaceFields& f, const Vec4& X) {
  Vec6 w{X[0], X[1], X[2], X[3], 0.0, 0.0};
  return matvec(f.lift, w);
}

Vec3 vertical_part(const TotalSpaceFields& f, const Vec6& W) {
  const Vec6 c = matvec(f.coframe, W);
  Vec3 r;
  for (int i = 0; i < 3; ++i) r[i] = c[4] * f.dP_u[i] + c[5] * f.dP_v[i];
  return r;
}

TwoVector fiber_two_vector(const SelfDualBasis& basis, const Vec3& v) {
  return fiber_two_vector_t(basis, v);
}

Vec3 fiber_coordinates(const Mat4& g, const SelfDualBasis& basis, const TwoVector& b) {
  return {two_vector_inner(g, b, basis.s(1)), two_vector_inner(g, b, basis.s(2)),
          two_vector_inner(g, b, basis.s(0))};
}

Mat6 J_field(const TwistorChart& chart, const Point6& q) { return values_of(chart.fields(q).J); }

JResiduals j_residuals(const TotalSpaceFields& f) {
  const Mat6 J = values_of(f.J), h = values_of(f.h);
  const Mat6 J2 = matmul(J, J);
  const Mat6 hJJ = matmul(transpose(J), matmul(h, J));
  JResiduals r;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      r.square = std::max(r.square, std::abs(J2[i][j] + (i == j ? 1.0 : 0.0)));
      r.compatibility = std::max(r.compatibility, std::abs(hJJ[i][j] - h[i][j]));
    }
  for (int k = 0; k < 4; ++k) {
    Vec4 X{};
    X[k] = 1.0;
    const Vec6 JX = matvec(J, horizontal_lift(f, X));
    r.splitting = std::max(r.splitting, max_abs3(vertical_part(f, JX)));
  }
  return r;
}

Tensor6 nijenhuis_bracket(const TotalSpaceFields& f) {
  const auto& J = f.J;
  Mat6 Jv = values_of(J);
  std::array<Mat6, 6> dJ{};  // dJ[c][i][j] = d_c J^i_j
  for (int c = 0; c < 6; ++c)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) dJ[c][i][j] = J[i][j].is_scalar() ? 0.0 : J[i][j].partial_value(c);
  Tensor6 n{};
  for (int d = 0; d < 6; ++d)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        double s = 0.0;
        for (int c = 0; c < 6; ++c) {
          s += Jv[c][a] * dJ[c][d][b] - Jv[c][b] * dJ[c][d][a] + Jv[d][c] * dJ[b][c][a] -
               Jv[d][c] * dJ[a][c][b];
        }
        n[d][a][b] = s;
      }
  return n;
}

Tensor6 nijenhuis_bracket(const TwistorChart& chart, const Point6& q) {
  return nijenhuis_bracket(chart.fields(q));
}

Vec6 contract(const Tensor6& n, const Vec6& A, const Vec6& B) {
  Vec6 r{};
  for (int d = 0; d < 6; ++d)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) r[d] += n[d][a][b] * A[a] * B[b];
  return r;
}

double max_abs(const Tensor6& n) {
  double m = 0.0;
  for (const auto& s : n)
    for (const auto& row : s)
      for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

DOmega::DOmega(const TotalSpaceFields& f) : J_(values_of(f.J)) {
  Mat6T<Jet> om = zero_matrix<Jet, 6>();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) om[a][b] += f.J[c][a] * f.h[c][b];
  const auto gm = christoffel6(f.h);
  const Mat6 ov = values_of(om);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double s = om[b][c].is_scalar() ? 0.0 : om[b][c].partial_value(a);
        for (int e = 0; e < 6; ++e) s -= gm[e][a][b] * ov[e][c] + gm[e][a][c] * ov[b][e];
        T_[a][b][c] = s;
      }
}

double DOmega::t(const Vec6& a, const Vec6& b, const Vec6& c) const {
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) s += T_[i][j][k] * a[i] * b[j] * c[k];
  return s;
}

double DOmega::operator()(const Vec6& X, const Vec6& Y, const Vec6& Z) const {
  const Vec6 JX = matvec(J_, X), JY = matvec(J_, Y);
  return t(X, JY, Z) - t(JY, X, Z) - t(Y, JX, Z) + t(JX, Y, Z);
}

double nijenhuis_domega(const TotalSpaceFields& f, const Vec6& A, const Vec6& B, const Vec6& C) {
  return DOmega(f)(A, B, C);
}

StructureResiduals verify_structure_identities(const TwistorChart& chart, const Point6& q,
                                               std::uint64_t seed) {
  const TotalSpaceFields f = chart.fields(q);
  const LocalGeometry geo = local_geometry(chart.base().metric(), base_point(q), 2);
  const Mat4& g = f.g;
  const SelfDualBasis& sb = f.basis;
  Rng rng(seed);
  auto rv4 = [&] {
    Vec4 v;
    for (auto& c : v) c = rng.uniform(-1.0, 1.0);
    return v;
  };
  const Vec4 X = rv4(), Y = rv4(), Z = rv4();
  const double va = rng.uniform(-1, 1), vb = rng.uniform(-1, 1);
  const double ua = rng.uniform(-1, 1), ub = rng.uniform(-1, 1);
  const Vec6 V6 = vertical6(va, vb), U6 = vertical6(ua, ub);
  auto fiber_vec = [&](double a, double b) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a * f.dP_u[i] + b * f.dP_v[i];
    return r;
  };
  const Vec3 Vv = fiber_vec(va, vb), Uv = fiber_vec(ua, ub);
  const TwoVector p2 = fiber_two_vector(sb, f.P);
  const TwoVector XY = TwoVector::wedge(X, Y), XZ = TwoVector::wedge(X, Z);
  StructureResiduals r;

  {  // (1) on the unit vector p/|p| with V orthogonal to it
    const double pn = std::sqrt(dot(f.P, f.P));
    const Vec3 ph{f.P[0] / pn, f.P[1] / pn, f.P[2] / pn};
    Vec3 w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double d = dot(w, ph);
    for (int i = 0; i < 3; ++i) w[i] -= d * ph[i];
    const Mat4 K = k_endomorphism(g, fiber_two_vector(sb, ph));
    const TwoVector lhs = TwoVector::wedge(matvec(K, X), Y);
    r.id1 = std::abs(two_vector_inner(g, fiber_two_vector(sb, cross(ph, w)), lhs) -
                     two_vector_inner(g, fiber_two_vector(sb, w), XY));
  }

  const auto gm = christoffel6(f.h);
  const double eps = f.epsilon;
  // Derivative of the field Y^h along A: only its v component varies.
  auto dlift = [&](const Vec4& W, const Vec6& A) {
    Vec6 d{};
    for (int k = 0; k < 4; ++k)
      for (int a = 0; a < 4; ++a) d[5] -= eps * W[k] * f.dbeta[k][a] * A[a];
    return d;
  };

  const TwoVector rho_xy_p = rho_apply(geo, XY, p2);
  const Vec3 rho_c = fiber_coordinates(g, sb, rho_xy_p);
  {  // (2)
    const Vec6 Xh = horizontal_lift(f, X), Yh = horizontal_lift(f, Y);
    Vec6 D = gamma_contract(gm, Xh, Yh);
    const Vec6 dY = dlift(Y, Xh);
    for (int c = 0; c < 6; ++c) D[c] += dY[c];
    const Vec3 vert = vertical_part(f, D);
    Vec3 diff, alt;
    for (int i = 0; i < 3; ++i) {
      diff[i] = vert[i] - 0.5 * rho_c[i];
      alt[i] = vert[i] + 0.5 * rho_c[i];
    }
    r.id2 = max_abs3(diff);
    r.id2_opposite_sign = max_abs3(alt);
  }
  {  // (3)
    const Vec6 Xh = horizontal_lift(f, X);
    const Vec6 D = gamma_contract(gm, V6, Xh);  // X^h does not depend on the fiber coordinates
    const TwoVector pV = fiber_two_vector(sb, cross(f.P, Vv));
    const Vec4 RX = matvec(curvature_endomorphism(geo, pV), X);
    Vec4 half;
    for (int i = 0; i < 4; ++i) half[i] = 0.5 * RX[i];
    const Vec6 target = horizontal_lift(f, half);
    double m = 0.0;
    for (int c = 0; c < 6; ++c) m = std::max(m, std::abs(D[c] - target[c]));
    r.id3 = m;
  }
  {  // (4)
    const double t1 = dot(cross(f.normal, rho_c), Uv);
    const TwoVector xi = fiber_two_vector(sb, cross(f.P, cross(f.normal, Uv)));
    const double t2 = curvature_pairing(geo, xi, XY);
    r.id4 = std::abs(t1 + t2);
  }
  const Tensor6 N = nijenhuis_bracket(f);
  const Mat6 h = values_of(f.h), J = values_of(f.J);
  {  // (5)
    const Vec6 Xh = horizontal_lift(f, X), Zh = horizontal_lift(f, Z);
    const double lhs = dot6(h, contract(N, Xh, U6), Zh);
    Vec3 dFu, dFv;
    {
      const Jet u = Jet::variable(q[4], 0, 2, 1), v = Jet::variable(q[5], 1, 2, 1);
      const auto F = chart.fiber_target(u, v);
      for (int i = 0; i < 3; ++i) {
        dFu[i] = F[i].partial_value(0);
        dFv[i] = F[i].partial_value(1);
      }
    }
    auto push = [&](double a, double b) {
      Vec3 w;
      for (int i = 0; i < 3; ++i) w[i] = a * dFu[i] + b * dFv[i];
      return w;
    };
    const Vec3 fU = push(ua, ub);
    const Vec6 JU = matvec(J, U6);
    const Vec3 fJU = push(JU[4], JU[5]);
    const Vec3 JfU = cross(f.F, fU);
    Vec3 diff;
    for (int i = 0; i < 3; ++i) diff[i] = JfU[i] - fJU[i];
    const double rhs = 2.0 * two_vector_inner(g, fiber_two_vector(sb, diff), XZ);
    r.id5 = std::abs(lhs - rhs);
  }
  {  // J = K_{F(p)} on the base
    const Vec6 Xh = horizontal_lift(f, X), Yh = horizontal_lift(f, Y);
    const double lhs = dot6(h, contract(N, Xh, Yh), U6);
    const Vec4 JX = matvec(f.K, X), JY = matvec(f.K, Y);
    const TwoVector a = TwoVector::wedge(JX, JY) - XY;
    const TwoVector b = TwoVector::wedge(X, JY) + TwoVector::wedge(JX, Y);
    const Vec6 JU6 = matvec(J, U6);
    const Vec3 JUv = fiber_vec(JU6[4], JU6[5]);
    const TwoVector pU = fiber_two_vector(sb, cross(f.P, Uv));
    const TwoVector pJU = fiber_two_vector(sb, cross(f.P, JUv));
    const double rhs = curvature_pairing(geo, a, pU) + curvature_pairing(geo, b, pJU);
    r.horizontal_nijenhuis = std::abs(lhs - rhs);
    r.horizontal_nijenhuis_opposite_sign = std::abs(lhs + rhs);
  }
  return r;
}

FormJet pullback_omega(const TotalSpaceFields& f) {
  Mat6T<Jet> m = zero_matrix<Jet, 6>();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) m[a][b] += f.K_jet[c][a] * f.g_jet[c][b];
  return two_form(m);
}

FormJet omega_fs(const TotalSpaceFields& f) {
  VecT<Jet, 6> theta, du;
  for (int i = 0; i < 6; ++i) theta[i] = du[i] = Jet(0.0);
  for (int k = 0; k < 4; ++k) theta[k] = f.epsilon * f.beta_jet[k];
  theta[5] = Jet(1.0);
  du[4] = Jet(1.0);
  return wedge(one_form(theta), one_form(du));
}

namespace {

Jet fiber_weight(const TotalSpaceFields& f, const OmegaOptions& opt) {
  if (!opt.h) return Jet(1.0);
  if (opt.h->uses(Expression::alpha)) throw InputError("fiber weight must not depend on alpha");
  std::array<Jet, Expression::kVarCount> vars;
  vars[Expression::zeta] = f.u;
  vars[Expression::alpha] = f.v;
  for (int i = 0; i < 4; ++i)
    vars[Expression::x1 + i] = Jet::variable(f.q[i], i, 6, 1);
  return exp(opt.h->evaluate<Jet>(vars));
}

void require_twistor(const TwistorChart& chart) {
  if (chart.is_modified()) throw UsageError("Omega_h is defined on Tw charts only");
}

void require_positive(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InputError("Omega coefficients a, b must be positive");
}

}  // namespace

FormJet omega_h(const TwistorChart& chart, const TotalSpaceFields& f, const OmegaOptions& opt) {
  require_twistor(chart);
  require_positive(opt.a, opt.b);
  return Jet(opt.a) * pullback_omega(f) + (Jet(opt.b) * fiber_weight(f, opt)) * omega_fs(f);
}

FormJet omega_h(const TwistorChart& chart, const Point6& q, const OmegaOptions& opt) {
  return omega_h(chart, chart.fields(q), opt);
}

BalancedPoint balanced_at(const TwistorChart& chart, const Point6& q, const OmegaOptions& opt,
                          std::uint64_t seed) {
  const TotalSpaceFields f = chart.fields(q);
  const FormJet om = omega_h(chart, f, opt);
  BalancedPoint r;
  r.d_omega2 = max_abs(exterior_derivative(wedge(om, om)));
  r.d_omega = max_abs(exterior_derivative(om));
  const FormJet fs = fiber_weight(f, opt) * omega_fs(f);
  r.proof_step = max_abs(wedge(exterior_derivative(fs), values_of(pullback_omega(f))));
  const FormValue ov = values_of(om);
  const Mat6 J = values_of(f.J), h = values_of(f.h);
  Rng rng(seed);
  r.positivity = std::numeric_limits<double>::infinity();
  for (int probe = 0; probe < 8; ++probe) {
    Vec6 w;
    for (auto& c : w) c = rng.uniform(-1.0, 1.0);
    const std::array<Vec6, 2> pair{w, matvec(J, w)};
    r.positivity = std::min(r.positivity, evaluate_form(ov, pair) / dot6(h, w, w));
  }
  return r;
}

ConePoint cone_at(const TwistorChart& chart, const Point6& q, double a, double b) {
  require_twistor(chart);
  require_positive(a, b);
  const TotalSpaceFields f = chart.fields(q);
  const FormValue pw = values_of(pullback_omega(f));
  const FormValue fs = values_of(omega_fs(f));
  FormValue om = a * pw + b * fs;
  const FormValue om2 = wedge(om, om);
  FormValue vol_g(4);
  vol_g[0] = std::sqrt(determinant(f.g));
  const double vol = wedge(vol_g, fs)[0];
  ConePoint r;
  r.c1 = wedge(om2, fs)[0] / vol;
  r.c2 = wedge(om2, pw)[0] / vol;
  return r;
}

CalibrationResult calibrate_epsilon(const HermitianSurface& base, int probes, std::uint64_t seed) {
  constexpr double kStep = 1e-2;
  constexpr int kSubsteps = 8;
  CalibrationResult res;
  const auto pts = sample_points(base.chart(), probes, seed);
  int votes = 0;
  for (const auto& x0 : pts) {
    const Vec4 b0 = values_of(beta_form(base, x0, 2));
    int k = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(b0[i]) > std::abs(b0[k])) k = i;
    if (std::abs(b0[k]) < 1e-6) continue;
    auto at = [&](double t) {
      Point4 x = x0;
      x[k] += t;
      return x;
    };
    auto rhs = [&](double t, const TwoVector& V) {
      const Christoffel gm = christoffel(base.metric(), at(t));
      TwoVector d;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int l = 0; l < 4; ++l) d.c[i][j] -= gm[i][k][l] * V.c[l][j] + gm[j][k][l] * V.c[i][l];
      return d;
    };
    TwoVector V = sd_basis(adapted_frame(base, x0), values_of(base.metric().jets(x0, 1))).s(1);
    const double dt = kStep / kSubsteps;
    for (int s = 0; s < kSubsteps; ++s) {
      const double t = s * dt;
      const TwoVector k1 = rhs(t, V);
      const TwoVector k2 = rhs(t + dt / 2, V + (dt / 2) * k1);
      const TwoVector k3 = rhs(t + dt / 2, V + (dt / 2) * k2);
      const TwoVector k4 = rhs(t + dt, V + dt * k3);
      V = V + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const Point4 x1 = at(kStep);
    const Mat4 g1 = values_of(base.metric().jets(x1, 1));
    const SelfDualBasis sb1 = sd_basis(adapted_frame(base, x1), g1);
    const double delta =
        std::atan2(two_vector_inner(g1, V, sb1.s(2)), two_vector_inner(g1, V, sb1.s(1)));
    const double integral = kStep / 6 *
                            (b0[k] + 4 * beta_form(base, at(kStep / 2), 2)[k].value() +
                             beta_form(base, x1, 2)[k].value());
    const int eps = (-delta / integral) > 0 ? 1 : -1;
    ++res.probes;
    votes += eps;
    if (res.probes > 1 && eps != res.epsilon) res.consistent = false;
    res.epsilon = eps;
    res.residual = std::max(res.residual, std::abs(delta + integral) / kStep);
    res.flipped_residual = std::max(res.flipped_residual, std::abs(delta - integral) / kStep);
  }
  res.calibrated = res.probes > 0;
  res.epsilon = votes >= 0 ? 1 : -1;
  if (res.epsilon < 0) std::swap(res.residual, res.flipped_residual);
  return res;
}

}  // namespace tw
