#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet holds the Taylor coefficients of a smooth function around a point,
// truncated at a fixed total degree. Coefficients are stored raw: the entry
// for multi-index m is  d^m f / m!  (m! = prod_i m_i!). jet_extract() and
// Jet::derivative() multiply the factorial back in and return the plain
// partial derivative.
//
// Storage is dense and inline (kJetCapacity doubles). Supported shapes are
// n_vars <= 6 with C(n_vars + order, order) <= kJetCapacity, which covers
// order 3 in 6 variables and order 4 in 4 variables.
//
// A jet with a single coefficient (order 0, or the default-constructed value)
// acts as a scalar constant and combines with any other layout.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace tw {

inline constexpr int kJetCapacity = 84;
inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 8;

struct JetLayout;

class Jet {
 public:
  Jet();
  Jet(double c);  // NOLINT(google-explicit-constructor): scalars mix freely

  static Jet constant(double c, int n_vars, int order);
  static Jet variable(double value, int var, int n_vars, int order);

  int n_vars() const;
  int order() const;
  int size() const;
  bool is_scalar() const { return size() == 1; }

  double value() const { return c_[0]; }
  // Raw Taylor coefficient.
  double coefficient(std::span<const int> multi_index) const;
  // Partial derivative d^m f (factorial applied).
  double derivative(std::span<const int> multi_index) const;
  // First partial derivative along `var` at the expansion point.
  double partial_value(int var) const;

  // Jet of d f / d x_var, one order lower.
  Jet partial(int var) const;
  Jet truncated(int order) const;
  // Re-express as a jet in `n_vars` variables; source variable v becomes
  // target variable var_map[v].
  Jet embedded(int n_vars, std::span<const int> var_map) const;

  std::span<const double> coefficients() const;
  std::span<const int> multi_index(int idx) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  // Taylor composition: taylor[k] = f^(k)(x0) / k! with x0 = value().
  friend Jet compose(const Jet& x, std::span<const double> taylor);

 private:
  explicit Jet(const JetLayout* layout);
  const JetLayout* layout_;
  std::array<double, kJetCapacity> c_{};
};

// Coordinate jets for `point`: degree-0 part point[i], unit first-order
// coefficient in direction i. Order must satisfy the capacity rule above.
std::vector<Jet> jet_seed(std::span<const double> point, int order);

// Partial derivative selected by `multi_index`; throws UsageError when the
// index has the wrong length or exceeds the jet order.
double jet_extract(const Jet& value, std::span<const int> multi_index);

Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double exponent);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet atan(const Jet& x);
Jet tanh(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);

// Univariate Taylor coefficients (k-th entry f^(k)(x0)/k!) up to `order`.
namespace series {
std::vector<double> exp(double x0, int order);
std::vector<double> log(double x0, int order);
std::vector<double> pow(double x0, double exponent, int order);
std::vector<double> reciprocal(double x0, int order);
std::vector<double> sin(double x0, int order);
std::vector<double> cos(double x0, int order);
std::vector<double> atan(double x0, int order);
std::vector<double> tanh(double x0, int order);
}  // namespace series

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

std::ostream& operator<<(std::ostream& os, const Jet& j);

}  // namespace tw
