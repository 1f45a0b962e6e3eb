#pragma once

// Hermitian and Kähler surfaces on a real 4-chart (x1, x2, x3, x4) with
// complex coordinates z1 = x1 + i x2, z2 = x3 + i x4 and the constant
// complex structure I d1 = d2, I d3 = d4. The Kähler form is
// omega(X, Y) = g(IX, Y).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tw/errors.hpp"
#include "tw/geometry.hpp"

namespace tw {

using Potential = std::function<Jet(const Vec4T<Jet>&)>;

// Constant matrix of I (column j holds I d_j).
const Mat4& standard_complex_structure();

class HermitianSurface {
 public:
  HermitianSurface(MetricField metric, std::optional<Potential> potential);

  const std::string& name() const { return metric_.name(); }
  const MetricField& metric() const { return metric_; }
  const ChartDomain& chart() const { return metric_.chart(); }
  bool from_potential() const { return potential_.has_value(); }
  const Potential& potential() const { return *potential_; }

  // omega_ij = g(I d_i, d_j) as jets of the given order.
  Mat4T<Jet> omega(const Point4& x, int order) const;

 private:
  MetricField metric_;
  std::optional<Potential> potential_;
};
using KahlerPotentialMetric = HermitianSurface;

// g from the complex Hessian of the potential. Metric jets of order k use
// potential jets of order k + 2; the Hessian must be positive definite at
// every evaluated point (GeometryError naming the point otherwise).
HermitianSurface metric_from_potential(std::string name, ChartDomain chart,
                                       Potential potential);

// Potential F(|z|^2) of a U(2)-invariant metric.
Potential radial_potential(std::function<Jet(const Jet& s)> f);

using FixtureParams = std::map<std::string, double>;

// flat, fubini_study, eguchi_hanson {a}, burns {m}; hermitian_perturbed is a
// non-Kähler conformal perturbation of flat space kept as a negative control.
HermitianSurface make_fixture(const std::string& name, const FixtureParams& params = {});
bool is_known_fixture(const std::string& name);
std::vector<std::string> fixture_names();

// e1 = d1/|d1|, e2 = I e1, e3 = unit part of d3 orthogonal to e1, e2, e4 = I e3.
template <class T>
FrameT<T> adapted_frame(const Mat4T<T>& g) {
  using std::sqrt;
  const Mat4& I = standard_complex_structure();
  auto ip = [&](const Vec4T<T>& a, const Vec4T<T>& b) {
    T s(0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += g[i][j] * a[i] * b[j];
    return s;
  };
  auto apply_i = [&](const Vec4T<T>& v) {
    Vec4T<T> r;
    for (int i = 0; i < 4; ++i) {
      r[i] = T(0.0);
      for (int j = 0; j < 4; ++j)
        if (I[i][j] != 0.0) r[i] += I[i][j] * v[j];
    }
    return r;
  };
  FrameT<T> f;
  Vec4T<T> d1, d3;
  for (int i = 0; i < 4; ++i) {
    d1[i] = T(i == 0 ? 1.0 : 0.0);
    d3[i] = T(i == 2 ? 1.0 : 0.0);
  }
  const T n1 = T(1.0) / sqrt(ip(d1, d1));
  for (int i = 0; i < 4; ++i) f.e[0][i] = d1[i] * n1;
  f.e[1] = apply_i(f.e[0]);
  const T p1 = ip(d3, f.e[0]), p2 = ip(d3, f.e[1]);
  for (int i = 0; i < 4; ++i) d3[i] = d3[i] - p1 * f.e[0][i] - p2 * f.e[1][i];
  const T n2sq = ip(d3, d3);
  if (value_of(n2sq) < 1e-24) throw GeometryError("adapted frame: degenerate seed vector");
  const T n3 = T(1.0) / sqrt(n2sq);
  for (int i = 0; i < 4; ++i) f.e[2][i] = d3[i] * n3;
  f.e[3] = apply_i(f.e[2]);
  return f;
}

Frame adapted_frame(const HermitianSurface& surface, const Point4& x);

// Covariant derivative of a 2-vector field given as jets:
// (nabla_k b)^{ij} = d_k b^{ij} + Gamma^i_{kl} b^{lj} + Gamma^j_{kl} b^{il}.
std::array<TwoVectorT<Jet>, 4> covariant_derivative(
    const TwoVectorT<Jet>& b, const std::array<Mat4T<Jet>, 4>& gamma);

// beta(d_k) = g(nabla_k s2, s3), with s_i from the adapted frame. Returned as
// jets one order below `order` (the metric jet order).
Vec4T<Jet> beta_form(const HermitianSurface& surface, const Point4& x, int order = 2);

struct ConnectionResiduals {
  double nabla_s1 = 0.0;         // max |nabla_k s1|
  double s2_along_s2 = 0.0;      // max |g(nabla_k s2, s2)|
  double s3_along_s2 = 0.0;      // max |g(nabla_k s3, s2) + beta_k|
  double s2_minus_beta_s3 = 0.0; // max |nabla_k s2 - beta_k s3|
};
ConnectionResiduals connection_residuals(const HermitianSurface& surface, const Point4& x);

struct KahlerResiduals {
  double d_omega = 0.0;      // max |(d omega)_ijk|
  double nabla_omega = 0.0;  // max |(nabla omega)_kij|
  double i_invariance = 0.0; // max |g(I., I.) - g|
  double omega_dual = 0.0;   // <s1 - omega#, s1 - omega#>
};
KahlerResiduals kahler_residuals(const HermitianSurface& surface, const Point4& x);

}  // namespace tw
