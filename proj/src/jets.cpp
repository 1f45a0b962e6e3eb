#include "tw/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>

#include "tw/errors.hpp"

namespace tw {

struct JetLayout {
  int n_vars = 0;
  int order = 0;
  int size = 1;
  // multi-indices, degree-graded then lexicographically descending; the
  // ordering within a degree does not depend on `order`, so a layout of lower
  // order is a prefix of any higher-order layout in the same variables.
  std::vector<int> indices;  // size * n_vars
  std::vector<int> degree;
  std::vector<double> factorial;  // prod m_i!
  struct Product {
    int a, b, out;
  };
  std::vector<Product> products;
  std::vector<int> raise;  // raise[idx * n_vars + v] = index of m + e_v, or -1

  std::span<const int> mi(int idx) const {
    return {indices.data() + static_cast<std::size_t>(idx) * n_vars,
            static_cast<std::size_t>(n_vars)};
  }
};

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void enumerate_degree(int n, int deg, int var, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (var == n - 1) {
    cur[var] = deg;
    out.push_back(cur);
    return;
  }
  for (int d = deg; d >= 0; --d) {
    cur[var] = d;
    enumerate_degree(n, deg - d, var + 1, cur, out);
  }
}

std::unique_ptr<JetLayout> build_layout(int n, int order) {
  auto layout = std::make_unique<JetLayout>();
  layout->n_vars = n;
  layout->order = order;
  std::vector<std::vector<int>> all;
  if (n == 0) {
    all.emplace_back();
  } else {
    std::vector<int> cur(n, 0);
    for (int d = 0; d <= order; ++d) enumerate_degree(n, d, 0, cur, all);
  }
  layout->size = static_cast<int>(all.size());
  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < layout->size; ++i) {
    lookup[all[i]] = i;
    layout->indices.insert(layout->indices.end(), all[i].begin(), all[i].end());
    int deg = 0;
    double fact = 1.0;
    for (int m : all[i]) {
      deg += m;
      for (int k = 2; k <= m; ++k) fact *= k;
    }
    layout->degree.push_back(deg);
    layout->factorial.push_back(fact);
  }
  std::vector<int> sum(n);
  for (int a = 0; a < layout->size; ++a) {
    for (int b = 0; b < layout->size; ++b) {
      if (layout->degree[a] + layout->degree[b] > order) continue;
      for (int v = 0; v < n; ++v) sum[v] = all[a][v] + all[b][v];
      layout->products.push_back({a, b, lookup.at(sum)});
    }
  }
  layout->raise.assign(static_cast<std::size_t>(layout->size) * n, -1);
  for (int a = 0; a < layout->size; ++a) {
    for (int v = 0; v < n; ++v) {
      auto up = all[a];
      ++up[v];
      auto it = lookup.find(up);
      if (it != lookup.end()) layout->raise[a * n + v] = it->second;
    }
  }
  return layout;
}

class LayoutRegistry {
 public:
  LayoutRegistry() {
    for (int n = 0; n <= kMaxJetVars; ++n) {
      for (int o = 0; o <= kMaxJetOrder; ++o) {
        if (n == 0 && o > 0) continue;
        if (binomial(n + o, o) > kJetCapacity) continue;
        table_[n][o] = build_layout(n, o);
      }
    }
  }
  const JetLayout* get(int n, int order) const {
    if (n < 0 || n > kMaxJetVars || order < 0 || order > kMaxJetOrder)
      return nullptr;
    if (n == 0) return table_[0][0].get();
    return table_[n][order].get();
  }

 private:
  std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>,
             kMaxJetVars + 1>
      table_;
};

const LayoutRegistry& registry() {
  static const LayoutRegistry r;
  return r;
}

const JetLayout* layout_for(int n, int order) {
  const JetLayout* l = registry().get(n, order);
  if (l == nullptr) {
    throw ConfigurationError("unsupported jet shape: " + std::to_string(n) +
                             " variables at order " + std::to_string(order));
  }
  return l;
}

const JetLayout* scalar_layout() { return registry().get(0, 0); }

// Common layout for a binary operation.
const JetLayout* common_layout(const JetLayout* a, const JetLayout* b) {
  if (a->size == 1) return b;
  if (b->size == 1) return a;
  if (a->n_vars != b->n_vars) {
    throw UsageError("jet variable count mismatch: " +
                     std::to_string(a->n_vars) + " vs " +
                     std::to_string(b->n_vars));
  }
  return a->order <= b->order ? a : b;
}

}  // namespace

Jet::Jet() : layout_(scalar_layout()) {}

Jet::Jet(double c) : layout_(scalar_layout()) { c_[0] = c; }

Jet::Jet(const JetLayout* layout) : layout_(layout) {}

Jet Jet::constant(double c, int n_vars, int order) {
  Jet j(layout_for(n_vars, order));
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(double value, int var, int n_vars, int order) {
  if (var < 0 || var >= n_vars) throw UsageError("jet variable out of range");
  Jet j = constant(value, n_vars, order);
  if (order >= 1) j.c_[1 + var] = 1.0;
  return j;
}

int Jet::n_vars() const { return layout_->n_vars; }
int Jet::order() const { return layout_->order; }
int Jet::size() const { return layout_->size; }

std::span<const double> Jet::coefficients() const {
  return {c_.data(), static_cast<std::size_t>(layout_->size)};
}

std::span<const int> Jet::multi_index(int idx) const { return layout_->mi(idx); }

namespace {

int find_index(const JetLayout& l, std::span<const int> mi) {
  if (static_cast<int>(mi.size()) != l.n_vars) {
    throw UsageError("multi-index length " + std::to_string(mi.size()) +
                     " does not match " + std::to_string(l.n_vars) +
                     " jet variables");
  }
  int deg = 0;
  for (int m : mi) {
    if (m < 0) throw UsageError("negative multi-index entry");
    deg += m;
  }
  if (deg > l.order) {
    throw UsageError("multi-index degree " + std::to_string(deg) +
                     " exceeds jet order " + std::to_string(l.order));
  }
  for (int i = 0; i < l.size; ++i) {
    if (l.degree[i] != deg) continue;
    auto cand = l.mi(i);
    if (std::equal(cand.begin(), cand.end(), mi.begin())) return i;
  }
  throw UsageError("multi-index not found");  // unreachable for valid input
}

}  // namespace

double Jet::coefficient(std::span<const int> mi) const {
  return c_[find_index(*layout_, mi)];
}

double Jet::derivative(std::span<const int> mi) const {
  const int idx = find_index(*layout_, mi);
  return c_[idx] * layout_->factorial[idx];
}

double Jet::partial_value(int var) const {
  if (var < 0 || var >= layout_->n_vars) {
    if (is_scalar()) return 0.0;
    throw UsageError("partial_value: variable out of range");
  }
  if (layout_->order < 1) throw UsageError("partial_value needs order >= 1");
  return c_[1 + var];
}

Jet Jet::partial(int var) const {
  if (is_scalar()) return Jet(0.0);
  if (var < 0 || var >= layout_->n_vars)
    throw UsageError("partial: variable out of range");
  if (layout_->order < 1) throw UsageError("partial of an order-0 jet");
  Jet out(layout_for(layout_->n_vars, layout_->order - 1));
  const int n = layout_->n_vars;
  for (int i = 0; i < out.layout_->size; ++i) {
    const int up = layout_->raise[i * n + var];
    const int m = layout_->mi(i)[var];
    out.c_[i] = (m + 1) * c_[up];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (is_scalar() || order >= layout_->order) return *this;
  Jet out(layout_for(layout_->n_vars, order));
  std::copy_n(c_.begin(), out.layout_->size, out.c_.begin());
  return out;
}

Jet Jet::embedded(int n_vars, std::span<const int> var_map) const {
  if (is_scalar()) return *this;
  if (static_cast<int>(var_map.size()) != layout_->n_vars)
    throw UsageError("embedded: var_map size mismatch");
  const JetLayout* target = layout_for(n_vars, layout_->order);
  Jet out(target);
  std::vector<int> mi(n_vars);
  for (int i = 0; i < layout_->size; ++i) {
    std::fill(mi.begin(), mi.end(), 0);
    auto src = layout_->mi(i);
    for (int v = 0; v < layout_->n_vars; ++v) {
      if (var_map[v] < 0 || var_map[v] >= n_vars)
        throw UsageError("embedded: target variable out of range");
      mi[var_map[v]] += src[v];
    }
    out.c_[find_index(*target, mi)] += c_[i];
  }
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  const JetLayout* l = common_layout(layout_, o.layout_);
  if (l != layout_) {
    Jet r(l);
    const int keep = std::min(layout_->size, l->size);
    std::copy_n(c_.begin(), keep, r.c_.begin());
    *this = r;
  }
  const int n = std::min(o.layout_->size, layout_->size);
  for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet Jet::operator-() const {
  Jet r = *this;
  for (int i = 0; i < layout_->size; ++i) r.c_[i] = -r.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (b.is_scalar()) {
    Jet r = a;
    const double s = b.c_[0];
    for (int i = 0; i < r.layout_->size; ++i) r.c_[i] *= s;
    return r;
  }
  if (a.is_scalar()) return b * a;
  const JetLayout* l = common_layout(a.layout_, b.layout_);
  Jet r(l);
  for (const auto& p : l->products) r.c_[p.out] += a.c_[p.a] * b.c_[p.b];
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet compose(const Jet& x, std::span<const double> taylor) {
  const int k_max = x.order();
  if (static_cast<int>(taylor.size()) < k_max + 1)
    throw UsageError("compose: not enough Taylor coefficients");
  if (x.is_scalar()) return Jet(taylor[0]);
  Jet delta = x;
  delta.c_[0] = 0.0;
  Jet r = Jet::constant(taylor[k_max], x.n_vars(), x.order());
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += taylor[k];
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_scalar()) {
    if (b.c_[0] == 0.0) throw DomainError("division by zero jet");
    return a * Jet(1.0 / b.c_[0]);
  }
  if (b.c_[0] == 0.0)
    throw DomainError("division by a jet with zero degree-0 part");
  return a * compose(b, series::reciprocal(b.c_[0], b.order()));
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

std::vector<Jet> jet_seed(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  if (order < 1) throw ConfigurationError("jet order must be >= 1");
  for (double p : point)
    if (!std::isfinite(p)) throw InputError("jet_seed: non-finite point");
  layout_for(n, order);  // validates the shape
  std::vector<Jet> out;
  out.reserve(point.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(point[i], i, n, order));
  return out;
}

double jet_extract(const Jet& value, std::span<const int> multi_index) {
  return value.derivative(multi_index);
}

namespace series {

std::vector<double> exp(double x0, int order) {
  std::vector<double> t(order + 1);
  double e = std::exp(x0);
  double f = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f *= k;
    t[k] = e / f;
  }
  return t;
}

std::vector<double> log(double x0, int order) {
  if (!(x0 > 0.0)) throw DomainError("log of non-positive value");
  std::vector<double> t(order + 1);
  t[0] = std::log(x0);
  double p = x0;
  for (int k = 1; k <= order; ++k) {
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * p);
    p *= x0;
  }
  return t;
}

std::vector<double> pow(double x0, double a, int order) {
  const bool integral = a >= 0.0 && a == std::floor(a);
  if (!(x0 > 0.0) && !integral)
    throw DomainError("non-integer power of non-positive value");
  std::vector<double> t(order + 1);
  if (integral && x0 == 0.0) {
    const int ia = static_cast<int>(a);
    for (int k = 0; k <= order; ++k) t[k] = (k == ia) ? 1.0 : 0.0;
    return t;
  }
  double binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) binom *= (a - (k - 1)) / k;
    t[k] = binom * std::pow(x0, a - k);
  }
  return t;
}

std::vector<double> reciprocal(double x0, int order) {
  if (x0 == 0.0) throw DomainError("reciprocal of zero");
  std::vector<double> t(order + 1);
  double p = 1.0 / x0;
  for (int k = 0; k <= order; ++k) {
    t[k] = ((k % 2 == 0) ? 1.0 : -1.0) * p;
    p /= x0;
  }
  return t;
}

std::vector<double> sin(double x0, int order) {
  std::vector<double> t(order + 1);
  const double s = std::sin(x0), c = std::cos(x0);
  const double cyc[4] = {s, c, -s, -c};
  double f = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f *= k;
    t[k] = cyc[k % 4] / f;
  }
  return t;
}

std::vector<double> cos(double x0, int order) {
  std::vector<double> t(order + 1);
  const double s = std::sin(x0), c = std::cos(x0);
  const double cyc[4] = {c, -s, -c, s};
  double f = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f *= k;
    t[k] = cyc[k % 4] / f;
  }
  return t;
}

std::vector<double> atan(double x0, int order) {
  // y' = 1 / (p0 + p1 d + d^2) with p0 = 1 + x0^2, p1 = 2 x0.
  std::vector<double> r(order + 1, 0.0);
  const double p0 = 1.0 + x0 * x0, p1 = 2.0 * x0;
  for (int k = 0; k <= order; ++k) {
    double acc = (k == 0) ? 1.0 : 0.0;
    if (k >= 1) acc -= p1 * r[k - 1];
    if (k >= 2) acc -= r[k - 2];
    r[k] = acc / p0;
  }
  std::vector<double> t(order + 1);
  t[0] = std::atan(x0);
  for (int k = 1; k <= order; ++k) t[k] = r[k - 1] / k;
  return t;
}

std::vector<double> tanh(double x0, int order) {
  // y' = 1 - y^2
  std::vector<double> t(order + 1, 0.0);
  t[0] = std::tanh(x0);
  for (int k = 0; k < order; ++k) {
    double sq = 0.0;
    for (int i = 0; i <= k; ++i) sq += t[i] * t[k - i];
    t[k + 1] = ((k == 0 ? 1.0 : 0.0) - sq) / (k + 1);
  }
  return t;
}

}  // namespace series

Jet exp(const Jet& x) { return compose(x, series::exp(x.value(), x.order())); }
Jet log(const Jet& x) { return compose(x, series::log(x.value(), x.order())); }
Jet sqrt(const Jet& x) {
  if (!(x.value() > 0.0)) throw DomainError("sqrt of non-positive jet");
  return compose(x, series::pow(x.value(), 0.5, x.order()));
}
Jet pow(const Jet& x, double a) {
  return compose(x, series::pow(x.value(), a, x.order()));
}
Jet sin(const Jet& x) { return compose(x, series::sin(x.value(), x.order())); }
Jet cos(const Jet& x) { return compose(x, series::cos(x.value(), x.order())); }
Jet atan(const Jet& x) { return compose(x, series::atan(x.value(), x.order())); }
Jet tanh(const Jet& x) { return compose(x, series::tanh(x.value(), x.order())); }
Jet sinh(const Jet& x) { return 0.5 * (exp(x) - exp(-x)); }
Jet cosh(const Jet& x) { return 0.5 * (exp(x) + exp(-x)); }

std::ostream& operator<<(std::ostream& os, const Jet& j) {
  os << "Jet(n=" << j.n_vars() << ", order=" << j.order() << ") {";
  for (int i = 0; i < j.size(); ++i) {
    os << (i ? ", " : "") << "[";
    auto mi = j.multi_index(i);
    for (std::size_t v = 0; v < mi.size(); ++v) os << (v ? "," : "") << mi[v];
    os << "]=" << j.coefficients()[i];
  }
  return os << "}";
}

}  // namespace tw
