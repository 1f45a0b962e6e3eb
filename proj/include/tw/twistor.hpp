#pragma once

// Total spaces over a Kähler chart: the twistor space Tw(M) in coordinates
// (x1..x4, zeta, alpha) and the modified space S(M) in (x1..x4, z, theta).
//
// The fiber over x is a surface in the unit-sphere bundle of Lambda^2_+,
// written in R^3 coordinates (X, Y, Z) for the 2-vector Z s1 + X s2 + Y s3
// (s_i from the adapted frame). On this R^3 the Lambda^2_+ cross product is
// the usual one.
//   Tw:   P = (sqrt(1 - zeta^2) cos alpha, sqrt(1 - zeta^2) sin alpha, zeta)
//   S(M): P = (rho(z) cos theta, rho(z) sin theta, z)
// Parallel transport rotates (s2, s3) by the connection form
// beta = g(nabla s2, s3), so horizontal lifts are
//   d_k^h = d_k - eps beta_k d_v,
// and {dx^k, du, dv + eps beta} is the adapted coframe (u, v the fiber
// coordinates). eps = +1 for this sign of beta; calibrate_epsilon() confirms
// it by parallel transport.
//
// J acts as K_{F(p)} on horizontal vectors (F = p on Tw, F = f(p) on S(M))
// and as n(p) x . on vertical ones (n the outward unit normal of the fiber).
// h = pi^* g + (metric of the fiber surface in R^3).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tw/expression.hpp"
#include "tw/fibermap.hpp"
#include "tw/forms.hpp"
#include "tw/kahler.hpp"

namespace tw {

using Point6 = Vec<6>;
using Vec6 = Vec<6>;
template <class T>
using Mat6T = MatT<T, 6>;
using Tensor6 = std::array<std::array<std::array<double, 6>, 6>, 6>;  // N[d][a][b]

inline constexpr double kZetaMargin = 1e-2;

struct TotalSpaceFields {
  Point6 q{};
  Mat4 g{};
  SelfDualBasis basis;
  Vec4 beta{};
  Mat4 dbeta{};      // dbeta[k][l] = d_l beta_k
  Vec3 P{}, normal{}, F{};
  Vec3 dP_u{}, dP_v{};
  Mat4 K{};                  // K_{F(p)}
  Mat6T<Jet> h, J;           // order-1 jets in the six chart variables
  Mat4T<Jet> g_jet, K_jet;   // the same, base blocks
  Vec4T<Jet> beta_jet;
  Jet u, v;                  // fiber coordinate jets
  Mat6 coframe{}, lift{};    // rows dx, du, dv + eps beta; lift = coframe^-1
  int epsilon = 1;
};

class TwistorChart {
 public:
  // The base must come from a potential (ConfigurationError otherwise).
  static TwistorChart twistor(HermitianSurface base);
  static TwistorChart modified(HermitianSurface base, SurfaceProfile profile, EquivariantMap map);

  bool is_modified() const { return profile_.has_value(); }
  const HermitianSurface& base() const { return base_; }
  const SurfaceProfile& profile() const { return *profile_; }
  const EquivariantMap& map() const { return *map_; }
  int epsilon() const { return epsilon_; }
  void set_epsilon(int eps);
  std::string description() const;

  // Fiber point and its coordinate derivatives (order-1 jets in 6 variables
  // when the arguments are jets).
  std::array<Jet, 3> fiber_point(const Jet& u, const Jet& v) const;
  std::array<Jet, 3> fiber_normal(const Jet& u, const Jet& v) const;
  std::array<Jet, 3> fiber_target(const Jet& u, const Jet& v) const;  // F(p)

  bool admits(const Point6& q) const;
  std::vector<Point6> sample(int count, std::uint64_t seed) const;

  // Throws DomainError within the pole margin.
  TotalSpaceFields fields(const Point6& q) const;

 private:
  TwistorChart(HermitianSurface base, std::optional<SurfaceProfile> profile,
               std::optional<EquivariantMap> map);
  HermitianSurface base_;
  std::optional<SurfaceProfile> profile_;
  std::optional<EquivariantMap> map_;
  int epsilon_ = 1;
};

struct CalibrationResult {
  int epsilon = 1;
  bool calibrated = false;   // false when beta vanished at every probe
  bool consistent = true;    // all probes agree
  int probes = 0;
  double residual = 0.0;      // max |delta + eps int beta| / step (transport vs lift)
  double flipped_residual = 0.0;  // the same with -eps
};

// Parallel-transports s2 along short coordinate segments and compares the
// induced rotation with the horizontal-lift prediction for both signs.
CalibrationResult calibrate_epsilon(const HermitianSurface& base, int probes, std::uint64_t seed);

// K_a for a unit self-dual a (InputError otherwise).
Mat4 K_operator(const Mat4& g, const SelfDualBasis& basis, const TwoVector& a);

Vec6 horizontal_lift(const TotalSpaceFields& f, const Vec4& X);
// Vertical part of a 6-vector as an R^3 vector tangent to the fiber.
Vec3 vertical_part(const TotalSpaceFields& f, const Vec6& W);
// R^3 coordinates (X, Y, Z) -> 2-vector Z s1 + X s2 + Y s3.
TwoVector fiber_two_vector(const SelfDualBasis& basis, const Vec3& v);
Vec3 fiber_coordinates(const Mat4& g, const SelfDualBasis& basis, const TwoVector& b);

Mat6 J_field(const TwistorChart& chart, const Point6& q);

struct JResiduals {
  double square = 0.0;       // max |J^2 + Id|
  double compatibility = 0.0;  // max |h(J., J.) - h|
  double splitting = 0.0;    // max vertical part of J(horizontal lift)
};
JResiduals j_residuals(const TotalSpaceFields& f);

// N^d_ab on coordinate fields.
Tensor6 nijenhuis_bracket(const TotalSpaceFields& f);
Tensor6 nijenhuis_bracket(const TwistorChart& chart, const Point6& q);
Vec6 contract(const Tensor6& n, const Vec6& A, const Vec6& B);
double max_abs(const Tensor6& n);

// h(N(A,B), C) from the Levi-Civita derivative of Omega(X, Y) = h(JX, Y):
// (D_X Om)(JY, Z) - (D_JY Om)(X, Z) - (D_Y Om)(JX, Z) + (D_JX Om)(Y, Z).
class DOmega {
 public:
  explicit DOmega(const TotalSpaceFields& f);
  double operator()(const Vec6& A, const Vec6& B, const Vec6& C) const;

 private:
  double t(const Vec6& a, const Vec6& b, const Vec6& c) const;
  Mat6 J_;
  std::array<Mat6, 6> T_;  // T_[a][b][c] = (D_a Omega)_bc
};
double nijenhuis_domega(const TotalSpaceFields& f, const Vec6& A, const Vec6& B, const Vec6& C);

struct StructureResiduals {
  double id1 = 0.0;  // g(p x V, K_p X ^ Y) - g(V, X ^ Y)
  double id2 = 0.0;  // V(D_{X^h} Y^h) - 1/2 rho(X ^ Y) p
  double id3 = 0.0;  // D_V X^h - 1/2 (rho(p x V) X)^h
  double id4 = 0.0;  // g(n x rho(X ^ Y) p, U) + g(R(p x (n x U)), X ^ Y)
  double id5 = 0.0;  // h(N(X^h, U), Z^h) - 2 g(J f_* U - f_* J U, X ^ Z)
  // h(N(X^h, Y^h), U) - g(p x U, R(JX^JY - X^Y)) - g(p x JU, R(X^JY + JX^Y)),
  // R paired through the literal curvature as in id4.
  double horizontal_nijenhuis = 0.0;
  // The same two residuals with the curvature term negated.
  double id2_opposite_sign = 0.0;
  double horizontal_nijenhuis_opposite_sign = 0.0;
};

// Random X, Y, Z, V, U drawn from `seed`. Identity (5) is evaluated on every
// chart (trivial content on Tw, where f is the identity).
StructureResiduals verify_structure_identities(const TwistorChart& chart, const Point6& q,
                                               std::uint64_t seed);

// Fiber weight e^{h}: `h` may use zeta (and x1..x4 for negative controls);
// alpha dependence is rejected.
struct OmegaOptions {
  double a = 1.0;
  double b = 1.0;
  std::optional<Expression> h;  // none: h = 0
};

// a pi^*omega_p + b e^{h} omega_FS with omega_FS = (d alpha + eps beta) ^ d zeta
// (the J-positive orientation of the unit-sphere area form). Tw charts only.
FormJet omega_h(const TwistorChart& chart, const TotalSpaceFields& f, const OmegaOptions& opt);
FormJet omega_h(const TwistorChart& chart, const Point6& q, const OmegaOptions& opt);
FormJet pullback_omega(const TotalSpaceFields& f);
FormJet omega_fs(const TotalSpaceFields& f);

struct BalancedPoint {
  double d_omega2 = 0.0;      // max |d(Omega^2)|
  double d_omega = 0.0;       // max |d Omega| (not expected to vanish)
  double proof_step = 0.0;    // max |d(e^h omega_FS) ^ pi^* omega|
  double positivity = 0.0;    // min Omega(v, Jv) / |v|^2 over probes
};
BalancedPoint balanced_at(const TwistorChart& chart, const Point6& q, const OmegaOptions& opt,
                          std::uint64_t seed);

struct ConePoint {
  double c1 = 0.0;  // Omega_{a,b}^2 ^ omega_FS / vol_h
  double c2 = 0.0;  // Omega_{a,b}^2 ^ pi^* omega / vol_h
};
ConePoint cone_at(const TwistorChart& chart, const Point6& q, double a, double b);

}  // namespace tw
