#include "tw/forms.hpp"

#include <cmath>

namespace tw {

namespace {

std::array<std::vector<std::vector<int>>, kFormDim + 1> build_bases() {
  std::array<std::vector<std::vector<int>>, kFormDim + 1> out;
  for (int mask = 0; mask < (1 << kFormDim); ++mask) {
    std::vector<int> set;
    for (int i = 0; i < kFormDim; ++i)
      if (mask & (1 << i)) set.push_back(i);
    out[set.size()].push_back(set);
  }
  for (auto& b : out) std::sort(b.begin(), b.end());
  return out;
}

const std::array<std::vector<std::vector<int>>, kFormDim + 1>& bases() {
  static const auto b = build_bases();
  return b;
}

}  // namespace

const std::vector<std::vector<int>>& form_basis(int degree) {
  if (degree < 0 || degree > kFormDim) throw UsageError("form degree out of range");
  return bases()[degree];
}

int form_index(std::span<const int> increasing) {
  const auto& b = form_basis(static_cast<int>(increasing.size()));
  auto it = std::lower_bound(b.begin(), b.end(), increasing,
                             [](const std::vector<int>& a, std::span<const int> key) {
                               return std::lexicographical_compare(a.begin(), a.end(), key.begin(),
                                                                   key.end());
                             });
  if (it == b.end() || !std::equal(it->begin(), it->end(), increasing.begin(), increasing.end()))
    throw UsageError("form_index: index set is not increasing or out of range");
  return static_cast<int>(it - b.begin());
}

FormValue values_of(const FormJet& f) {
  FormValue r(f.degree());
  for (int i = 0; i < f.size(); ++i) r[i] = f[i].value();
  return r;
}

FormJet exterior_derivative_jets(const FormJet& alpha) {
  const int k = alpha.degree();
  if (k >= kFormDim) throw UsageError("exterior derivative of a top-degree form");
  FormJet r(k + 1);
  const auto& out = form_basis(k + 1);
  for (std::size_t o = 0; o < out.size(); ++o) {
    Jet acc(0.0);
    for (int pos = 0; pos <= k; ++pos) {
      std::vector<int> rest;
      for (int t = 0; t <= k; ++t)
        if (t != pos) rest.push_back(out[o][t]);
      const Jet term = alpha[form_index(rest)];
      if (term.is_scalar()) continue;  // constant component
      const Jet d = term.partial(out[o][pos]);
      if (pos % 2) acc -= d;
      else acc += d;
    }
    r[o] = acc;
  }
  return r;
}

FormValue exterior_derivative(const FormJet& alpha) {
  return values_of(exterior_derivative_jets(alpha));
}

double evaluate_form(const FormValue& alpha, std::span<const Vec<kFormDim>> v) {
  const int k = alpha.degree();
  if (static_cast<int>(v.size()) != k) throw UsageError("evaluate_form: wrong number of vectors");
  const auto& basis = form_basis(k);
  double total = 0.0;
  std::vector<int> perm(k);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    // det of the k x k minor (rows: basis indices, columns: vectors)
    for (int t = 0; t < k; ++t) perm[t] = t;
    double det = 0.0;
    do {
      int inv = 0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          if (perm[a] > perm[b]) ++inv;
      double prod = 1.0;
      for (int t = 0; t < k; ++t) prod *= v[perm[t]][basis[i][t]];
      det += inv % 2 ? -prod : prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += alpha[i] * det;
  }
  return total;
}

double max_abs(const FormValue& f) {
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace tw
