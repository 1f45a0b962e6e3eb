#pragma once

// Riemannian core on 4-dimensional charts.
//
// Conventions (used everywhere in the library):
//  * R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y];  R(d_i,d_j) d_k = R^l_{kij} d_l.
//  * Ric(Y,Z) = tr(X -> R(X,Y)Z), Scal = g^{ij} Ric_ij (positive on spheres).
//  * 2-vectors carry antisymmetric coordinate components b^{ij}; X^Y has
//    components X^i Y^j - X^j Y^i. Their inner product is the half-determinant
//    one: <X^Y, Z^T> = (1/2) det [g(X,Z) g(X,T); g(Y,Z) g(Y,T)], so
//    <a, b> = (1/4) a^{ij} b^{kl} g_ik g_jl and e1^e2 has squared norm 1/2.
//  * The curvature pairing B(X^Y, Z^T) = g(R(X,Y)Z, T) is the literal
//    "g(R(xi), eta)" bilinear form. CurvatureOperator stores the standard
//    normalisation -B/2, for which the round sphere has operator Id and the
//    self-dual block is W+ + Scal/12 Id.

#include <array>
#include <functional>
#include <string>

#include "tw/jets.hpp"
#include "tw/linalg.hpp"

namespace tw {

template <class T>
using Vec4T = VecT<T, 4>;
template <class T>
using Mat4T = MatT<T, 4>;
using Vec4 = Vec4T<double>;

template <class T>
struct TwoVectorT {
  Mat4T<T> c = zero_matrix<T, 4>();

  static TwoVectorT wedge(const Vec4T<T>& x, const Vec4T<T>& y) {
    TwoVectorT r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = x[i] * y[j] - x[j] * y[i];
    return r;
  }

  TwoVectorT& operator+=(const TwoVectorT& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c[i][j] += o.c[i][j];
    return *this;
  }
  TwoVectorT& operator-=(const TwoVectorT& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c[i][j] -= o.c[i][j];
    return *this;
  }
  friend TwoVectorT operator+(TwoVectorT a, const TwoVectorT& b) { return a += b; }
  friend TwoVectorT operator-(TwoVectorT a, const TwoVectorT& b) { return a -= b; }
  friend TwoVectorT operator*(const T& s, TwoVectorT a) {
    for (auto& row : a.c)
      for (auto& v : row) v = s * v;
    return a;
  }
};
using TwoVector = TwoVectorT<double>;

template <class T>
TwoVector values_of(const TwoVectorT<T>& b) {
  return TwoVector{values_of(b.c)};
}

// Largest |b^{ij} + b^{ji}|.
double antisymmetry_defect(const TwoVector& b);
double max_abs(const TwoVector& b);

struct ChartDomain {
  std::array<std::array<double, 2>, 4> box{};
  // Signed clearance from the excluded set; > 0 is admissible. Empty means
  // nothing is excluded.
  std::function<double(const Point4&)> clearance;
  double margin_fraction = 1e-2;
  // +1: dx1^dx2^dx3^dx4 is positive.
  int orientation = +1;

  double margin() const;
  bool admits(const Point4& x) const;
};

class MetricField {
 public:
  using Evaluator = std::function<Mat4T<Jet>(const Point4& x, int order)>;

  MetricField(std::string name, ChartDomain chart, Evaluator eval);

  const std::string& name() const { return name_; }
  const ChartDomain& chart() const { return chart_; }
  // Component jets (in 4 variables, centred at x) of the requested order.
  Mat4T<Jet> jets(const Point4& x, int order) const;
  Mat4 at(const Point4& x) const;

 private:
  std::string name_;
  ChartDomain chart_;
  Evaluator eval_;
};

// Metric given by closed-form component functions of the coordinates.
MetricField metric_from_components(
    std::string name, ChartDomain chart,
    std::function<Mat4T<Jet>(const Vec4T<Jet>&)> components);

using Christoffel = std::array<Mat4, 4>;  // gamma[k][i][j] = Gamma^k_ij
using Tensor4 = std::array<std::array<Mat4, 4>, 4>;

struct LocalGeometry {
  Point4 x{};
  int order = 2;
  Mat4T<Jet> g;
  Mat4T<Jet> g_inv;
  std::array<Mat4T<Jet>, 4> gamma;  // order - 1 jets
  Tensor4 r_up;    // r_up[l][k][i][j] = R^l_{kij}
  Tensor4 r_down;  // r_down[i][j][k][l] = g(R(d_i,d_j) d_k, d_l)
  Mat4 ricci{};
  double scal = 0.0;

  Mat4 metric() const { return values_of(g); }
};

// Christoffel jets from metric jets (result is one order lower).
std::array<Mat4T<Jet>, 4> christoffel_jets(const Mat4T<Jet>& g,
                                           const Mat4T<Jet>& g_inv);

Christoffel christoffel(const MetricField& metric, const Point4& x);

// Full curvature data at x. order >= 2 is required; the metric must be
// positive definite at x (GeometryError otherwise).
LocalGeometry local_geometry(const MetricField& metric, const Point4& x,
                             int order = 2);

struct CurvatureTensors {
  Tensor4 r_down;
  Mat4 ricci{};
  double scal = 0.0;
};
CurvatureTensors riemann_scalar(const MetricField& metric, const Point4& x,
                                int order = 2);

// Residuals of the algebraic symmetries of R_ijkl.
struct RiemannSymmetryResiduals {
  double first_pair = 0.0;   // R_ijkl + R_jikl
  double second_pair = 0.0;  // R_ijkl + R_ijlk
  double pair_swap = 0.0;    // R_ijkl - R_klij
  double bianchi = 0.0;      // R_ijkl + R_jkil + R_kijl
};
RiemannSymmetryResiduals riemann_symmetry_residuals(const Tensor4& r_down);

template <class T>
T two_vector_inner(const Mat4T<T>& g, const TwoVectorT<T>& a,
                   const TwoVectorT<T>& b) {
  T s(0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T lowered(0.0);  // a_{kl} g^.. contracted with b
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) lowered += g[i][k] * g[j][l] * b.c[k][l];
      s += a.c[i][j] * lowered;
    }
  return T(0.25) * s;
}

double two_vector_inner(const Mat4& g, const TwoVector& a, const TwoVector& b);

// Lowered components a_{ij} = g_ik g_jl a^{kl}.
template <class T>
Mat4T<T> lower(const Mat4T<T>& g, const TwoVectorT<T>& a) {
  auto r = zero_matrix<T, 4>();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) r[i][j] += g[i][k] * g[j][l] * a.c[k][l];
  return r;
}

int levi_civita(int i, int j, int k, int l);

TwoVector hodge_star_2(const Mat4& g, int orientation, const TwoVector& b);

template <class T>
struct FrameT {
  std::array<Vec4T<T>, 4> e;  // e[a] = coordinate components of e_{a+1}
};
using Frame = FrameT<double>;

template <class T>
Frame values_of(const FrameT<T>& f) {
  Frame r;
  for (int a = 0; a < 4; ++a) r.e[a] = values_of(f.e[a]);
  return r;
}

// Max |g(e_a, e_b) - delta_ab|.
double frame_gram_residual(const Mat4& g, const Frame& f);

// Gram-Schmidt on d_1..d_4 (positively oriented for the chart).
template <class T>
FrameT<T> orthonormal_frame(const Mat4T<T>& g) {
  using std::sqrt;
  FrameT<T> f;
  for (int a = 0; a < 4; ++a) {
    Vec4T<T> v;
    for (int i = 0; i < 4; ++i) v[i] = T(i == a ? 1.0 : 0.0);
    for (int b = 0; b < a; ++b) {
      T proj(0.0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) proj += g[i][j] * v[i] * f.e[b][j];
      for (int i = 0; i < 4; ++i) v[i] -= proj * f.e[b][i];
    }
    T n2(0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) n2 += g[i][j] * v[i] * v[j];
    const T inv = T(1.0) / sqrt(n2);
    for (int i = 0; i < 4; ++i) f.e[a][i] = v[i] * inv;
  }
  return f;
}

// (s1, s2, s3, t1, t2, t3):
//   s1 = e1^e2 + e3^e4, s2 = e1^e3 + e4^e2, s3 = e1^e4 + e2^e3,
//   t_i the same with the second term negated.
template <class T>
struct SelfDualBasisT {
  std::array<TwoVectorT<T>, 6> b;
  const TwoVectorT<T>& s(int i) const { return b[i]; }
  const TwoVectorT<T>& t(int i) const { return b[3 + i]; }
};
using SelfDualBasis = SelfDualBasisT<double>;

template <class T>
SelfDualBasisT<T> sd_basis_unchecked(const FrameT<T>& f) {
  using TV = TwoVectorT<T>;
  const auto& e = f.e;
  const TV e12 = TV::wedge(e[0], e[1]), e34 = TV::wedge(e[2], e[3]);
  const TV e13 = TV::wedge(e[0], e[2]), e42 = TV::wedge(e[3], e[1]);
  const TV e14 = TV::wedge(e[0], e[3]), e23 = TV::wedge(e[1], e[2]);
  return SelfDualBasisT<T>{{e12 + e34, e13 + e42, e14 + e23, e12 - e34,
                            e13 - e42, e14 - e23}};
}

// Validates orthonormality (residual <= 1e-10, GeometryError otherwise).
SelfDualBasis sd_basis(const Frame& frame, const Mat4& g);

template <class T>
SelfDualBasis values_of(const SelfDualBasisT<T>& s) {
  SelfDualBasis r;
  for (int a = 0; a < 6; ++a) r.b[a] = values_of(s.b[a]);
  return r;
}

// Literal pairing B(xi, eta) = (1/4) xi^{ij} eta^{kl} R_ijkl.
double curvature_pairing(const LocalGeometry& geo, const TwoVector& xi,
                         const TwoVector& eta);

// R(xi) acting on tangent vectors: (1/2) xi^{ij} R(d_i, d_j).
Mat4 curvature_endomorphism(const LocalGeometry& geo, const TwoVector& xi);

// Derivation action of an endomorphism on a 2-vector: A.(X^Y) = AX^Y + X^AY.
template <class T>
TwoVectorT<T> act_on_two_vector(const Mat4T<T>& a, const TwoVectorT<T>& v) {
  TwoVectorT<T> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T s(0.0);
      for (int k = 0; k < 4; ++k) s += a[i][k] * v.c[k][j] + a[j][k] * v.c[i][k];
      r.c[i][j] = s;
    }
  return r;
}

// rho(xi) v = R(xi) acting as a derivation on the 2-vector v.
TwoVector rho_apply(const LocalGeometry& geo, const TwoVector& xi,
                    const TwoVector& v);

class CurvatureOperator {
 public:
  CurvatureOperator(Mat6 matrix, double scal) : m_(matrix), scal_(scal) {}

  const Mat6& matrix() const { return m_; }
  double scal() const { return scal_; }
  Mat<3> plus_plus() const { return block(0, 0); }
  Mat<3> minus_minus() const { return block(3, 3); }
  Mat<3> ric0() const { return block(0, 3); }        // (+,-) block
  Mat<3> ric0_lower() const { return block(3, 0); }  // (-,+) block
  Mat<3> w_plus() const { return shifted(plus_plus()); }
  Mat<3> w_minus() const { return shifted(minus_minus()); }

 private:
  Mat<3> block(int r0, int c0) const;
  Mat<3> shifted(Mat<3> b) const;
  Mat6 m_;
  double scal_;
};

CurvatureOperator curvature_operator(const LocalGeometry& geo,
                                     const SelfDualBasis& basis);

// K_a with g(K_a X, Y) = 2 <a, X^Y>:  K^c_b = -a^{ci} g_ib. Linear in a and
// defined for any 2-vector; a complex structure when a is unit self-dual.
template <class T>
Mat4T<T> k_endomorphism(const Mat4T<T>& g, const TwoVectorT<T>& a) {
  auto k = zero_matrix<T, 4>();
  for (int c = 0; c < 4; ++c)
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 4; ++i) k[c][b] -= a.c[c][i] * g[i][b];
  return k;
}

// Cross product on self-dual 2-vectors: a x b = (1/2) K_a . b, so that
// s1 x s2 = s3 cyclically.
template <class T>
TwoVectorT<T> sd_cross(const Mat4T<T>& g, const TwoVectorT<T>& a,
                       const TwoVectorT<T>& b) {
  return T(0.5) * act_on_two_vector(k_endomorphism(g, a), b);
}

// Coefficients <v, s_i> on the first three basis elements.
Vec3 sd_coefficients(const Mat4& g, const SelfDualBasis& basis,
                     const TwoVector& v);
TwoVector from_sd_coefficients(const SelfDualBasis& basis, const Vec3& c);

}  // namespace tw
