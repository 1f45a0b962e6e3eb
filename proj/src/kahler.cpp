#include "tw/kahler.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace tw {

const Mat4& standard_complex_structure() {
  static const Mat4 I = {{{0.0, -1.0, 0.0, 0.0},
                          {1.0, 0.0, 0.0, 0.0},
                          {0.0, 0.0, 0.0, -1.0},
                          {0.0, 0.0, 1.0, 0.0}}};
  return I;
}

HermitianSurface::HermitianSurface(MetricField metric,
                                   std::optional<Potential> potential)
    : metric_(std::move(metric)), potential_(std::move(potential)) {}

Mat4T<Jet> HermitianSurface::omega(const Point4& x, int order) const {
  const auto g = metric_.jets(x, order);
  const Mat4& I = standard_complex_structure();
  auto w = zero_matrix<Jet, 4>();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (I[k][i] != 0.0) w[i][j] += I[k][i] * g[k][j];
  return w;
}

namespace {

std::string where(const Point4& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
  return os.str();
}

double radius(const Point4& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
}

ChartDomain box_chart(double half_width) {
  ChartDomain c;
  for (auto& iv : c.box) iv = {-half_width, half_width};
  return c;
}

double param(const FixtureParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

HermitianSurface metric_from_potential(std::string name, ChartDomain chart,
                                       Potential potential) {
  auto eval = [potential, name](const Point4& x, int order) {
    const auto seed = jet_seed(x, order + 2);
    const Vec4T<Jet> xs{seed[0], seed[1], seed[2], seed[3]};
    const Jet phi = potential(xs);
    std::array<Jet, 4> d1;
    for (int i = 0; i < 4; ++i) d1[i] = phi.partial(i);
    Mat4T<Jet> hess;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        hess[i][j] = d1[i].partial(j);
        hess[j][i] = hess[i][j];
      }
    Mat4T<Jet> g;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int xa = 2 * a, ya = 2 * a + 1, xb = 2 * b, yb = 2 * b + 1;
        const Jet re = 0.25 * (hess[xa][xb] + hess[ya][yb]);
        const Jet im = 0.25 * (hess[xa][yb] - hess[ya][xb]);
        g[xa][xb] = re;
        g[ya][yb] = re;
        g[xa][yb] = im;
        g[ya][xb] = -im;
      }
    if (!is_positive_definite(values_of(g))) {
      throw GeometryError("potential '" + name +
                          "' has a degenerate complex Hessian at " + where(x));
    }
    return g;
  };
  MetricField metric(std::move(name), std::move(chart), std::move(eval));
  return HermitianSurface(std::move(metric), std::move(potential));
}

Potential radial_potential(std::function<Jet(const Jet& s)> f) {
  return [f = std::move(f)](const Vec4T<Jet>& x) {
    return f(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  };
}

std::vector<std::string> fixture_names() {
  return {"flat", "fubini_study", "eguchi_hanson", "burns", "hermitian_perturbed"};
}

bool is_known_fixture(const std::string& name) {
  for (const auto& n : fixture_names())
    if (n == name) return true;
  return false;
}

HermitianSurface make_fixture(const std::string& name, const FixtureParams& params) {
  for (const auto& [key, value] : params) {
    const bool ok = (name == "eguchi_hanson" && key == "a") ||
                    (name == "burns" && key == "m");
    if (!ok) throw ConfigurationError("fixture '" + name + "' has no parameter '" + key + "'");
    if (!(value > 0.0) || !std::isfinite(value))
      throw ConfigurationError("fixture parameter '" + key + "' must be positive");
  }
  if (name == "flat") {
    return metric_from_potential(name, box_chart(1.5),
                                 radial_potential([](const Jet& s) { return s; }));
  }
  if (name == "fubini_study") {
    return metric_from_potential(
        name, box_chart(1.5), radial_potential([](const Jet& s) { return log(1.0 + s); }));
  }
  if (name == "eguchi_hanson") {
    const double a = param(params, "a", 1.0);
    const double a2 = a * a, a4 = a2 * a2;
    ChartDomain chart = box_chart(1.5 * a);
    chart.clearance = [a](const Point4& x) { return radius(x) - 0.5 * a; };
    return metric_from_potential(name, std::move(chart),
                                 radial_potential([a2, a4](const Jet& s) {
                                   const Jet r = sqrt(s * s + a4);
                                   return r + a2 * log(s / (r + a2));
                                 }));
  }
  if (name == "burns") {
    const double m = param(params, "m", 1.0);
    ChartDomain chart = box_chart(1.5);
    chart.clearance = [m](const Point4& x) { return radius(x) - 0.3 * std::sqrt(m); };
    return metric_from_potential(
        name, std::move(chart), radial_potential([m](const Jet& s) { return s + m * log(s); }));
  }
  if (name == "hermitian_perturbed") {
    auto metric = metric_from_components(name, box_chart(1.5), [](const Vec4T<Jet>& x) {
      auto g = zero_matrix<Jet, 4>();
      const Jet f = 1.0 + 0.2 * sin(x[0]) * cos(x[2]);
      for (int i = 0; i < 4; ++i) g[i][i] = f;
      return g;
    });
    return HermitianSurface(std::move(metric), std::nullopt);
  }
  throw UsageError("unknown metric fixture '" + name + "'");
}

Frame adapted_frame(const HermitianSurface& surface, const Point4& x) {
  const Mat4 g = surface.metric().at(x);
  if (!is_positive_definite(g))
    throw GeometryError("metric '" + surface.name() + "' is not positive definite at " + where(x));
  return adapted_frame<double>(g);
}

std::array<TwoVectorT<Jet>, 4> covariant_derivative(
    const TwoVectorT<Jet>& b, const std::array<Mat4T<Jet>, 4>& gamma) {
  std::array<TwoVectorT<Jet>, 4> out;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Jet v = b.c[i][j].partial(k);
        for (int l = 0; l < 4; ++l)
          v += gamma[i][k][l] * b.c[l][j] + gamma[j][k][l] * b.c[i][l];
        out[k].c[i][j] = v;
      }
  return out;
}

namespace {

struct FrameFields {
  Mat4T<Jet> g;
  std::array<Mat4T<Jet>, 4> gamma;
  SelfDualBasisT<Jet> basis;
};

FrameFields frame_fields(const HermitianSurface& surface, const Point4& x, int order) {
  if (order < 2) throw ConfigurationError("connection forms need metric jets of order >= 2");
  FrameFields f;
  f.g = surface.metric().jets(x, order);
  if (!is_positive_definite(values_of(f.g)))
    throw GeometryError("metric '" + surface.name() + "' is not positive definite at " + where(x));
  f.gamma = christoffel_jets(f.g, inverse(f.g));
  f.basis = sd_basis_unchecked(adapted_frame<Jet>(f.g));
  return f;
}

}  // namespace

Vec4T<Jet> beta_form(const HermitianSurface& surface, const Point4& x, int order) {
  const auto f = frame_fields(surface, x, order);
  const auto ds2 = covariant_derivative(f.basis.s(1), f.gamma);
  Vec4T<Jet> beta;
  for (int k = 0; k < 4; ++k) beta[k] = two_vector_inner<Jet>(f.g, ds2[k], f.basis.s(2));
  return beta;
}

ConnectionResiduals connection_residuals(const HermitianSurface& surface, const Point4& x) {
  const auto f = frame_fields(surface, x, 2);
  const Mat4 g = values_of(f.g);
  const SelfDualBasis b = values_of(f.basis);
  std::array<std::array<TwoVector, 4>, 3> ds;
  for (int i = 0; i < 3; ++i) {
    const auto d = covariant_derivative(f.basis.s(i), f.gamma);
    for (int k = 0; k < 4; ++k) ds[i][k] = values_of(d[k]);
  }
  ConnectionResiduals r;
  for (int k = 0; k < 4; ++k) {
    const double beta = two_vector_inner(g, ds[1][k], b.s(2));
    r.nabla_s1 = std::max(r.nabla_s1, max_abs(ds[0][k]));
    r.s2_along_s2 = std::max(r.s2_along_s2, std::abs(two_vector_inner(g, ds[1][k], b.s(1))));
    r.s3_along_s2 =
        std::max(r.s3_along_s2, std::abs(two_vector_inner(g, ds[2][k], b.s(1)) + beta));
    r.s2_minus_beta_s3 = std::max(r.s2_minus_beta_s3, max_abs(ds[1][k] - beta * b.s(2)));
  }
  return r;
}

KahlerResiduals kahler_residuals(const HermitianSurface& surface, const Point4& x) {
  const auto gj = surface.metric().jets(x, 1);
  const Mat4 g = values_of(gj);
  if (!is_positive_definite(g))
    throw GeometryError("metric '" + surface.name() + "' is not positive definite at " + where(x));
  const auto gamma_j = christoffel_jets(gj, inverse(gj));
  const auto w = surface.omega(x, 1);
  KahlerResiduals r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const double dw = w[j][k].partial_value(i) + w[k][i].partial_value(j) +
                          w[i][j].partial_value(k);
        r.d_omega = std::max(r.d_omega, std::abs(dw));
        double nw = w[i][j].partial_value(k);
        for (int l = 0; l < 4; ++l)
          nw -= gamma_j[l][k][i].value() * w[l][j].value() +
                gamma_j[l][k][j].value() * w[i][l].value();
        r.nabla_omega = std::max(r.nabla_omega, std::abs(nw));
      }
  const Mat4& I = standard_complex_structure();
  const Mat4 gii = matmul(transpose(I), matmul(g, I));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.i_invariance = std::max(r.i_invariance, std::abs(gii[i][j] - g[i][j]));

  const Mat4 gi = inverse(g);
  const Mat4 wv = values_of(w);
  TwoVector sharp;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += gi[i][a] * gi[j][b] * wv[a][b];
      sharp.c[i][j] = s;
    }
  const auto s1 = sd_basis_unchecked(adapted_frame<double>(g)).s(0);
  const TwoVector diff = s1 - sharp;
  r.omega_dual = two_vector_inner(g, diff, diff);
  return r;
}

}  // namespace tw
