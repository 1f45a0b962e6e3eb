#include "tw/fibermap.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tw/errors.hpp"

namespace tw {

namespace {

Jet seed1(double z, int order) {
  const double p[1] = {z};
  return jet_seed(p, order)[0];
}

// sqrt that tolerates an identically vanishing radicand (constant maps).
Jet sqrt_radicand(const Jet& r) {
  if (r.value() > 0.0) return sqrt(r);
  double worst = 0.0;
  for (double c : r.coefficients()) worst = std::max(worst, std::abs(c));
  if (worst <= 1e-14) return 0.0 * r;
  throw DomainError("closed-form radicand is negative or vanishes non-trivially");
}

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

double SurfaceProfile::value(double z) const { return rho(Jet(z)).value(); }

double SurfaceProfile::slope(double z) const { return rho(seed1(z, 1)).partial_value(0); }

SurfaceProfile make_profile(const std::string& name) {
  SurfaceProfile p;
  p.name = name;
  if (name == "sphere") {
    p.rho = [](const Jet& z) { return sqrt(1.0 - z * z); };
  } else if (name == "cylinder") {
    p.z_min = -2.0;
    p.z_max = 2.0;
    p.rho = [](const Jet& z) { return 1.0 + 0.0 * z; };
  } else if (name == "wide_cylinder") {
    p.z_min = -2.0;
    p.z_max = 2.0;
    p.rho = [](const Jet& z) { return std::sqrt(2.0) + 0.0 * z; };
  } else if (name == "cosh") {
    p.rho = [](const Jet& z) { return cosh(z); };
  } else {
    throw UsageError("unknown surface profile '" + name + "'");
  }
  return p;
}

std::vector<std::string> profile_names() { return {"sphere", "cylinder", "cosh", "wide_cylinder"}; }

Vec3 surface_point(const SurfaceProfile& profile, double z, double theta) {
  const double r = profile.value(z);
  return {r * std::cos(theta), r * std::sin(theta), z};
}

Vec3 gauss_map(const SurfaceProfile& profile, double z, double theta) {
  if (!profile.interior(z)) throw DomainError("gauss_map: z outside the open profile interval");
  const double d = profile.slope(z);
  const double n = std::sqrt(1.0 + d * d);
  return {std::cos(theta) / n, std::sin(theta) / n, -d / n};
}

Branch parse_branch(const std::string& name) {
  if (name == "paper_closed_form" || name == "paper") return Branch::paper_closed_form;
  if (name == "alternate_closed_form" || name == "alternate") return Branch::alternate_closed_form;
  if (name == "quadrature") return Branch::quadrature;
  throw UsageError("unknown branch '" + name + "'");
}

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::paper_closed_form: return "paper_closed_form";
    case Branch::alternate_closed_form: return "alternate_closed_form";
    case Branch::quadrature: return "quadrature";
  }
  return "?";
}

EquivariantMap::EquivariantMap(Branch branch, double c, int sign, Phi phi, std::string label)
    : branch_(branch), c_(c), sign_(sign), phi_(std::move(phi)), label_(std::move(label)) {}

double EquivariantMap::value(double z) const { return phi_(Jet(z)).value(); }

double EquivariantMap::slope(double z) const { return phi_(seed1(z, 1)).partial_value(0); }

EquivariantMap EquivariantMap::perturbed(double amount) const {
  Phi base = phi_;
  return EquivariantMap(branch_, c_, sign_,
                        [base, amount](const Jet& z) {
                          const Jet p = base(z);
                          return p + amount * (1.0 - p * p);
                        },
                        label_ + "+perturbed");
}

double meridian_log_length(const SurfaceProfile& profile, double z0, double z, double abs_tol) {
  if (z == z0) return 0.0;
  auto f = [&](double t) {
    const double d = profile.slope(t);
    return std::sqrt(1.0 + d * d) / profile.value(t);
  };
  const double lo = std::min(z0, z), hi = std::max(z0, z);
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0, l1 = 0.0;
  // One panel first: the subdivided error estimate is pessimistic on short,
  // smooth intervals.
  double v = Rule::integrate(f, lo, hi, 0, 1e-13, &err, &l1);
  if (!std::isfinite(v) || (err > abs_tol && err > 1e-13 * l1))
    v = Rule::integrate(f, lo, hi, 15, 1e-13, &err, &l1);
  if (!std::isfinite(v) || (err > abs_tol && err > 1e-13 * l1))
    throw NumericError("meridian quadrature did not converge (error estimate " +
                       [&] {
                         std::ostringstream os;
                         os << err;
                         return os.str();
                       }() + ")");
  return z < z0 ? -v : v;
}

EquivariantMap solve_phi(const SurfaceProfile& profile, double c, int sign, Branch branch,
                         const SolveOptions& options) {
  if (sign != 1 && sign != -1) throw ConfigurationError("map sign must be +1 or -1");
  if (!std::isfinite(c)) throw ConfigurationError("map constant must be finite");
  const double ec = std::exp(c);
  auto rho = profile.rho;
  std::string label = profile.name + "/" + branch_name(branch);
  EquivariantMap::Phi phi;

  switch (branch) {
    case Branch::paper_closed_form:
    case Branch::alternate_closed_form: {
      const bool inverse = branch == Branch::paper_closed_form;
      auto radicand = [=](const Jet& z) {
        const Jet r = rho(z);
        return inverse ? 1.0 - ec / (r * r) : 1.0 - ec * r * r;
      };
      bool any = false;
      for (int i = 1; i < 400 && !any; ++i) {
        const double z = profile.z_min + (profile.z_max - profile.z_min) * i / 400.0;
        any = radicand(Jet(z)).value() >= 0.0;
      }
      if (!any) throw DomainError(label + ": closed form undefined on the whole interval");
      phi = [=](const Jet& z) {
        const double zv = z.value();
        const double d = rho(seed1(zv, 1)).partial_value(0);
        const double s = sign * (inverse ? sgn(d) : sgn(-d));
        return s * sqrt_radicand(radicand(z));
      };
      break;
    }
    case Branch::quadrature: {
      const double z0 = options.z0.value_or(0.5 * (profile.z_min + profile.z_max));
      if (!profile.interior(z0)) throw DomainError(label + ": reference point outside profile");
      const double tol = options.abs_tol;
      SurfaceProfile prof = profile;
      phi = [=](const Jet& z) {
        const double zv = z.value();
        if (!prof.interior(zv)) throw DomainError("quadrature map evaluated outside the profile");
        const double l0 = meridian_log_length(prof, z0, zv, tol);
        const int n = z.order();
        std::vector<double> taylor(n + 1, 0.0);
        taylor[0] = l0;
        if (n >= 1) {
          const Jet r = prof.rho(seed1(zv, n));
          const Jet d = r.partial(0);
          const Jet lp = sqrt(1.0 + d * d) / r.truncated(n - 1);
          const auto coef = lp.coefficients();
          for (int k = 1; k <= n; ++k) taylor[k] = coef[k - 1] / k;
        }
        const Jet l = compose(z, taylor);
        return tanh(static_cast<double>(sign) * l + c);
      };
      break;
    }
  }
  return EquivariantMap(branch, c, sign, std::move(phi), std::move(label));
}

ConformalityReport conformality_check(const SurfaceProfile& profile, const EquivariantMap& map,
                                      int sample_count) {
  if (sample_count < 1) throw ConfigurationError("conformality_check needs samples");
  ConformalityReport rep;
  const double w = profile.z_max - profile.z_min;
  const double lo = profile.z_min + 0.01 * w, hi = profile.z_max - 0.01 * w;
  bool all_flat = true;
  for (int i = 0; i < sample_count; ++i) {
    ConformalitySample s;
    s.z = lo + (hi - lo) * (i + 0.5) / sample_count;
    try {
      const Jet p = map.phi(seed1(s.z, 1));
      s.phi = p.value();
      s.dphi = p.partial_value(0);
    } catch (const DomainError&) {
      s.skipped = true;
    }
    if (!s.skipped && std::abs(s.phi) > 1.0 - kPoleMargin) s.skipped = true;
    if (s.skipped) {
      ++rep.points_skipped;
      rep.samples.push_back(s);
      continue;
    }
    const double r = profile.value(s.z), d = profile.slope(s.z);
    const double q = std::sqrt(1.0 - s.phi * s.phi);
    s.sigma_meridian = std::abs(s.dphi) / (q * std::sqrt(1.0 + d * d));
    s.sigma_parallel = q / r;
    s.anisotropy = std::abs(s.sigma_meridian / s.sigma_parallel - 1.0);
    if (std::abs(s.dphi) > 1e-12) all_flat = false;
    if (!(s.dphi > 0.0)) rep.orientation_preserving = false;
    rep.max_anisotropy = std::max(rep.max_anisotropy, s.anisotropy);
    ++rep.points_tested;
    rep.samples.push_back(s);
  }
  rep.degenerate_constant = rep.points_tested > 0 && all_flat;
  return rep;
}

std::string completeness_name(Completeness c) {
  switch (c) {
    case Completeness::complete: return "complete";
    case Completeness::incomplete: return "incomplete";
    case Completeness::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kTruncation = 1e-6;

// Integral of w(lat) over [0, pi/2 - kTruncation] (or the mirrored interval),
// taken in t = log(pi/2 - |lat|) so the pole growth becomes smooth.
double truncated_integral(const std::function<double(double)>& w, bool north, int depth) {
  const double s = north ? 1.0 : -1.0;
  auto f = [&](double t) {
    const double u = std::exp(t);
    return w(s * (kHalfPi - u)) * u;
  };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, std::log(kTruncation), std::log(kHalfPi), depth, 1e-12, &err);
}

double growth_exponent(const std::function<double(double)>& w, bool north) {
  const double s = north ? 1.0 : -1.0;
  const double u1 = 1e-5, u2 = 1e-6;
  const double f1 = w(s * (kHalfPi - u1)), f2 = w(s * (kHalfPi - u2));
  return -(std::log(f2) - std::log(f1)) / (std::log(u2) - std::log(u1));
}

Completeness verdict_from(double qn, double qs) {
  const double q = std::min(qn, qs);
  if (q < 0.95) return Completeness::incomplete;
  if (q >= 1.05) return Completeness::complete;
  return Completeness::inconclusive;
}

}  // namespace

CompletenessResult completeness_power_pole(double p) {
  if (!std::isfinite(p) || p < 0.0) throw ConfigurationError("power_pole needs p >= 0");
  CompletenessResult r;
  auto w = [p](double lat) { return std::pow(std::cos(lat), -p); };
  r.exponent_north = r.exponent_south = p;
  r.truncated_north = truncated_integral(w, true, 15);
  r.truncated_south = r.truncated_north;
  r.verdict = p >= 1.0 ? Completeness::complete : Completeness::incomplete;
  r.method = "power_pole exact rule (p >= 1)";
  return r;
}

CompletenessResult completeness_expression(const Expression& h, int quadrature_budget) {
  if (h.uses(Expression::alpha) || h.uses(Expression::x1) || h.uses(Expression::x2) ||
      h.uses(Expression::x3) || h.uses(Expression::x4))
    throw InputError("completeness weight must depend on zeta only");
  auto w = [&h](double lat) {
    const double z = std::sin(lat);
    return std::exp(0.5 * h.evaluate_zeta(z));
  };
  const int grid = 2000;
  for (int i = 0; i <= grid; ++i) {
    const double lat = -kHalfPi + 1e-3 + (std::numbers::pi - 2e-3) * i / grid;
    double v = 0.0;
    try {
      v = w(lat);
    } catch (const DomainError&) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(v) || v <= 0.0)
      throw InputError("weight e^{h/2} is singular inside the fiber at zeta = " +
                       std::to_string(std::sin(lat)));
  }
  CompletenessResult r;
  r.exponent_north = growth_exponent(w, true);
  r.exponent_south = growth_exponent(w, false);
  r.truncated_north = truncated_integral(w, true, quadrature_budget);
  r.truncated_south = truncated_integral(w, false, quadrature_budget);
  r.verdict = verdict_from(r.exponent_north, r.exponent_south);
  r.method = "power-law growth fit at both poles";
  return r;
}

}  // namespace tw
