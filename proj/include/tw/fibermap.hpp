#pragma once

// Rotational fiber surfaces S = {(rho(z) cos t, rho(z) sin t, z)} in R^3, the
// equivariant maps f(t, z) = (t, phi(z)) onto the unit sphere written in
// height/longitude coordinates, and the completeness test for the weighted
// fiber metrics e^{h(zeta)} g_S2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tw/expression.hpp"
#include "tw/jets.hpp"
#include "tw/linalg.hpp"

namespace tw {

struct SurfaceProfile {
  std::string name;
  double z_min = -1.0, z_max = 1.0;  // open interval
  std::function<Jet(const Jet& z)> rho;

  double value(double z) const;
  double slope(double z) const;  // rho'(z)
  bool interior(double z) const { return z > z_min && z < z_max; }
};

// sphere: sqrt(1 - z^2) on (-1, 1); cylinder: 1 on (-2, 2); cosh: cosh z on
// (-1, 1); wide_cylinder: sqrt(2) on (-2, 2).
SurfaceProfile make_profile(const std::string& name);
std::vector<std::string> profile_names();

// Outward unit normal at (z, theta).
Vec3 gauss_map(const SurfaceProfile& profile, double z, double theta);
// Surface point at (z, theta).
Vec3 surface_point(const SurfaceProfile& profile, double z, double theta);

enum class Branch { paper_closed_form, alternate_closed_form, quadrature };
Branch parse_branch(const std::string& name);
std::string branch_name(Branch b);

class EquivariantMap {
 public:
  using Phi = std::function<Jet(const Jet& z)>;
  EquivariantMap(Branch branch, double c, int sign, Phi phi, std::string label);

  Branch branch() const { return branch_; }
  double c() const { return c_; }
  int sign() const { return sign_; }
  const std::string& label() const { return label_; }

  // phi(z) for a jet in any number of variables.
  Jet phi(const Jet& z) const { return phi_(z); }
  double value(double z) const;
  double slope(double z) const;

  // phi -> phi + amount (1 - phi^2); no longer conformal for amount != 0.
  EquivariantMap perturbed(double amount) const;

 private:
  Branch branch_;
  double c_;
  int sign_;
  Phi phi_;
  std::string label_;
};

struct SolveOptions {
  std::optional<double> z0;  // quadrature reference point, default the midpoint
  double abs_tol = 1e-12;
};

// paper_closed_form: phi = sign sgn(rho') sqrt(1 - e^c rho^-2)
// alternate_closed_form: phi = sign sgn(-rho') sqrt(1 - e^c rho^2)
// quadrature: phi = tanh(sign l(z) + c), l(z) = int_{z0}^{z} sqrt(1 + rho'^2) / rho
// With sign = +1 each branch is orientation preserving wherever it is
// nonconstant. Throws DomainError when the branch is undefined on the whole
// profile interval and NumericError when quadrature does not converge.
EquivariantMap solve_phi(const SurfaceProfile& profile, double c, int sign, Branch branch,
                         const SolveOptions& options = {});

// Arc-length-over-radius integral l(z) by adaptive Gauss-Kronrod quadrature.
double meridian_log_length(const SurfaceProfile& profile, double z0, double z, double abs_tol);

struct ConformalitySample {
  double z = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  double sigma_meridian = 0.0;
  double sigma_parallel = 0.0;
  double anisotropy = 0.0;  // |sigma_meridian / sigma_parallel - 1|
  bool skipped = false;     // |phi| within the pole margin or outside the domain
};

struct ConformalityReport {
  double max_anisotropy = 0.0;
  bool orientation_preserving = true;
  bool degenerate_constant = false;  // |phi'| <= 1e-12 at every tested sample
  int points_tested = 0;
  int points_skipped = 0;
  std::vector<ConformalitySample> samples;
};

inline constexpr double kPoleMargin = 1e-3;

// Samples z at interval midpoints of a uniform grid on the profile interval
// shrunk by a 1% margin at each end.
ConformalityReport conformality_check(const SurfaceProfile& profile, const EquivariantMap& map,
                                      int sample_count);

enum class Completeness { complete, incomplete, inconclusive };
std::string completeness_name(Completeness c);

struct CompletenessResult {
  Completeness verdict = Completeness::inconclusive;
  // Fitted growth exponents q of e^{h/2} ~ (pi/2 - |lat|)^-q toward each pole
  // (lat is the latitude with zeta = sin lat); divergence iff q >= 1.
  double exponent_north = 0.0;
  double exponent_south = 0.0;
  // Truncated integrals of e^{h/2} d lat up to 1e-6 from the poles.
  double truncated_north = 0.0;
  double truncated_south = 0.0;
  std::string method;
};

// power_pole: h_p(zeta) = -p log(1 - zeta^2), decided by p >= 1.
CompletenessResult completeness_power_pole(double p);
// User h(zeta): growth fit near both poles; inconclusive within 0.05 of q = 1.
CompletenessResult completeness_expression(const Expression& h, int quadrature_budget = 15);

}  // namespace tw
