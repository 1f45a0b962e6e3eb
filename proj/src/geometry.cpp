#include "tw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "tw/errors.hpp"

namespace tw {

double antisymmetry_defect(const TwoVector& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(b.c[i][j] + b.c[j][i]));
  return m;
}

double max_abs(const TwoVector& b) { return max_abs(b.c); }

double ChartDomain::margin() const {
  double w = box[0][1] - box[0][0];
  for (const auto& iv : box) w = std::min(w, iv[1] - iv[0]);
  return margin_fraction * w;
}

bool ChartDomain::admits(const Point4& x) const {
  const double m = margin();
  for (int i = 0; i < 4; ++i) {
    if (!(x[i] >= box[i][0] + m && x[i] <= box[i][1] - m)) return false;
  }
  if (clearance && clearance(x) < m) return false;
  return true;
}

MetricField::MetricField(std::string name, ChartDomain chart, Evaluator eval)
    : name_(std::move(name)), chart_(std::move(chart)), eval_(std::move(eval)) {
  for (const auto& iv : chart_.box) {
    if (!(iv[1] > iv[0])) throw ConfigurationError("empty chart box");
  }
}

Mat4T<Jet> MetricField::jets(const Point4& x, int order) const {
  return eval_(x, order);
}

Mat4 MetricField::at(const Point4& x) const { return values_of(eval_(x, 1)); }

MetricField metric_from_components(
    std::string name, ChartDomain chart,
    std::function<Mat4T<Jet>(const Vec4T<Jet>&)> components) {
  auto eval = [components = std::move(components)](const Point4& x, int order) {
    auto seed = jet_seed(x, order);
    Vec4T<Jet> xs{seed[0], seed[1], seed[2], seed[3]};
    return components(xs);
  };
  return MetricField(std::move(name), std::move(chart), std::move(eval));
}

namespace {

std::string describe(const Point4& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
  return os.str();
}

void require_spd(const Mat4& g, const Point4& x, const std::string& name) {
  double asym = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) asym = std::max(asym, std::abs(g[i][j] - g[j][i]));
  if (asym > 1e-12 * (1.0 + max_abs(g)) || !is_positive_definite(g)) {
    throw GeometryError("metric '" + name + "' is not symmetric positive " +
                        "definite at " + describe(x));
  }
}

}  // namespace

std::array<Mat4T<Jet>, 4> christoffel_jets(const Mat4T<Jet>& g,
                                           const Mat4T<Jet>& g_inv) {
  std::array<Mat4T<Jet>, 4> dg;  // dg[k][i][j] = d_k g_ij
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dg[k][i][j] = g[i][j].partial(k);
  std::array<Mat4T<Jet>, 4> gamma;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet s(0.0);
        for (int l = 0; l < 4; ++l) {
          s += g_inv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        }
        gamma[k][i][j] = 0.5 * s;
        gamma[k][j][i] = gamma[k][i][j];
      }
  return gamma;
}

Christoffel christoffel(const MetricField& metric, const Point4& x) {
  const auto g = metric.jets(x, 1);
  require_spd(values_of(g), x, metric.name());
  const auto gamma = christoffel_jets(g, inverse(g));
  Christoffel out;
  for (int k = 0; k < 4; ++k) out[k] = values_of(gamma[k]);
  return out;
}

LocalGeometry local_geometry(const MetricField& metric, const Point4& x,
                             int order) {
  if (order < 2) {
    throw ConfigurationError("curvature needs metric jets of order >= 2");
  }
  LocalGeometry geo;
  geo.x = x;
  geo.order = order;
  geo.g = metric.jets(x, order);
  require_spd(values_of(geo.g), x, metric.name());
  geo.g_inv = inverse(geo.g);
  geo.gamma = christoffel_jets(geo.g, geo.g_inv);

  const auto& gm = geo.gamma;
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double v = gm[l][j][k].partial_value(i) - gm[l][i][k].partial_value(j);
          for (int m = 0; m < 4; ++m) {
            v += gm[l][i][m].value() * gm[m][j][k].value() -
                 gm[l][j][m].value() * gm[m][i][k].value();
          }
          geo.r_up[l][k][i][j] = v;
        }
  const Mat4 g = geo.metric();
  const Mat4 g_inv = values_of(geo.g_inv);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double v = 0.0;
          for (int m = 0; m < 4; ++m) v += geo.r_up[m][k][i][j] * g[m][l];
          geo.r_down[i][j][k][l] = v;
        }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double v = 0.0;
      for (int i = 0; i < 4; ++i) v += geo.r_up[i][k][i][j];
      geo.ricci[j][k] = v;
    }
  geo.scal = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) geo.scal += g_inv[j][k] * geo.ricci[j][k];
  return geo;
}

CurvatureTensors riemann_scalar(const MetricField& metric, const Point4& x,
                                int order) {
  const auto geo = local_geometry(metric, x, order);
  return {geo.r_down, geo.ricci, geo.scal};
}

RiemannSymmetryResiduals riemann_symmetry_residuals(const Tensor4& r) {
  RiemannSymmetryResiduals out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          out.first_pair = std::max(out.first_pair, std::abs(r[i][j][k][l] + r[j][i][k][l]));
          out.second_pair = std::max(out.second_pair, std::abs(r[i][j][k][l] + r[i][j][l][k]));
          out.pair_swap = std::max(out.pair_swap, std::abs(r[i][j][k][l] - r[k][l][i][j]));
          out.bianchi = std::max(
              out.bianchi, std::abs(r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l]));
        }
  return out;
}

double two_vector_inner(const Mat4& g, const TwoVector& a, const TwoVector& b) {
  return two_vector_inner<double>(g, a, b);
}

int levi_civita(int i, int j, int k, int l) {
  if (i == j || i == k || i == l || j == k || j == l || k == l) return 0;
  int p[4] = {i, j, k, l};
  int sign = 1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) sign = -sign;
  return sign;
}

TwoVector hodge_star_2(const Mat4& g, int orientation, const TwoVector& b) {
  const Mat4 low = lower<double>(g, b);
  const double vol = std::sqrt(determinant(g));
  TwoVector r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += levi_civita(i, j, k, l) * low[k][l];
      r.c[i][j] = 0.5 * orientation * s / vol;
    }
  return r;
}

double frame_gram_residual(const Mat4& g, const Frame& f) {
  double m = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += g[i][j] * f.e[a][i] * f.e[b][j];
      m = std::max(m, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return m;
}

SelfDualBasis sd_basis(const Frame& frame, const Mat4& g) {
  const double res = frame_gram_residual(g, frame);
  if (res > 1e-10) {
    throw GeometryError("frame is not orthonormal (Gram residual " +
                        std::to_string(res) + ")");
  }
  return sd_basis_unchecked(frame);
}

double curvature_pairing(const LocalGeometry& geo, const TwoVector& xi,
                         const TwoVector& eta) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (xi.c[i][j] == 0.0) continue;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          s += xi.c[i][j] * eta.c[k][l] * geo.r_down[i][j][k][l];
    }
  return 0.25 * s;
}

Mat4 curvature_endomorphism(const LocalGeometry& geo, const TwoVector& xi) {
  Mat4 a{};
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += xi.c[i][j] * geo.r_up[l][k][i][j];
      a[l][k] = 0.5 * s;
    }
  return a;
}

TwoVector rho_apply(const LocalGeometry& geo, const TwoVector& xi,
                    const TwoVector& v) {
  return act_on_two_vector<double>(curvature_endomorphism(geo, xi), v);
}

Mat<3> CurvatureOperator::block(int r0, int c0) const {
  Mat<3> b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = m_[r0 + i][c0 + j];
  return b;
}

Mat<3> CurvatureOperator::shifted(Mat<3> b) const {
  for (int i = 0; i < 3; ++i) b[i][i] -= scal_ / 12.0;
  return b;
}

CurvatureOperator curvature_operator(const LocalGeometry& geo,
                                     const SelfDualBasis& basis) {
  Mat6 m{};
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) {
      m[a][b] = -0.5 * curvature_pairing(geo, basis.b[a], basis.b[b]);
      m[b][a] = m[a][b];
    }
  return CurvatureOperator(m, geo.scal);
}

Vec3 sd_coefficients(const Mat4& g, const SelfDualBasis& basis,
                     const TwoVector& v) {
  return {two_vector_inner(g, v, basis.s(0)), two_vector_inner(g, v, basis.s(1)),
          two_vector_inner(g, v, basis.s(2))};
}

TwoVector from_sd_coefficients(const SelfDualBasis& basis, const Vec3& c) {
  return c[0] * basis.s(0) + c[1] * basis.s(1) + c[2] * basis.s(2);
}

}  // namespace tw
