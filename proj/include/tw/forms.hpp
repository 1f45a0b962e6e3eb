#pragma once

// Differential forms on a 6-dimensional chart, stored by strictly increasing
// index sets: alpha = sum_{I increasing} alpha_I dx^I. With this convention
// (dx^1 ^ dx^2)(d_1, d_2) = 1.

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include "tw/errors.hpp"
#include "tw/jets.hpp"
#include "tw/linalg.hpp"

namespace tw {

inline constexpr int kFormDim = 6;

// Increasing index sets of size k in {0..5}, in lexicographic order.
const std::vector<std::vector<int>>& form_basis(int degree);
// Position of an increasing index set within form_basis(size).
int form_index(std::span<const int> increasing);

template <class T>
class FormT {
 public:
  FormT() : FormT(0) {}
  explicit FormT(int degree) : degree_(degree) {
    if (degree < 0 || degree > kFormDim) throw UsageError("form degree out of range");
    c_.assign(form_basis(degree).size(), T(0.0));
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(c_.size()); }
  const T& operator[](int i) const { return c_[i]; }
  T& operator[](int i) { return c_[i]; }

  // Component for an arbitrary index list (sign from sorting, 0 on repeats).
  T component(std::span<const int> idx) const {
    std::vector<int> s(idx.begin(), idx.end());
    int sign = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
      for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
        std::swap(s[j - 1], s[j]);
        sign = -sign;
      }
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
      if (s[j] == s[j + 1]) return T(0.0);
    return T(static_cast<double>(sign)) * c_[form_index(s)];
  }

  FormT& operator+=(const FormT& o) {
    check(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FormT& operator-=(const FormT& o) {
    check(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend FormT operator+(FormT a, const FormT& b) { return a += b; }
  friend FormT operator-(FormT a, const FormT& b) { return a -= b; }
  friend FormT operator*(const T& s, FormT a) {
    for (auto& v : a.c_) v = s * v;
    return a;
  }

 private:
  void check(const FormT& o) const {
    if (o.degree_ != degree_) throw UsageError("adding forms of different degree");
  }
  int degree_;
  std::vector<T> c_;
};

using FormValue = FormT<double>;
using FormJet = FormT<Jet>;

FormValue values_of(const FormJet& f);

// 1-form from components.
template <class T>
FormT<T> one_form(const VecT<T, kFormDim>& c) {
  FormT<T> f(1);
  for (int i = 0; i < kFormDim; ++i) f[i] = c[i];
  return f;
}

// 2-form from an antisymmetric component matrix (upper triangle is used).
template <class T>
FormT<T> two_form(const MatT<T, kFormDim>& m) {
  FormT<T> f(2);
  const auto& basis = form_basis(2);
  for (std::size_t i = 0; i < basis.size(); ++i) f[i] = m[basis[i][0]][basis[i][1]];
  return f;
}

template <class T>
FormT<T> wedge(const FormT<T>& a, const FormT<T>& b) {
  const int p = a.degree(), q = b.degree();
  if (p + q > kFormDim) throw UsageError("wedge degree exceeds the chart dimension");
  FormT<T> r(p + q);
  const auto& ba = form_basis(p);
  const auto& bb = form_basis(q);
  for (std::size_t i = 0; i < ba.size(); ++i) {
    for (std::size_t j = 0; j < bb.size(); ++j) {
      std::array<int, kFormDim> idx{};
      int n = 0;
      bool clash = false;
      for (int v : ba[i]) idx[n++] = v;
      for (int v : bb[j]) {
        for (int u : ba[i]) clash = clash || u == v;
        idx[n++] = v;
      }
      if (clash) continue;
      // Sign of the permutation sorting idx (insertion count of inversions).
      int inv = 0;
      for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t)
          if (idx[s] > idx[t]) ++inv;
      std::array<int, kFormDim> sorted = idx;
      std::sort(sorted.begin(), sorted.begin() + n);
      const T term = a[i] * b[j];
      if (inv % 2) r[form_index(std::span<const int>(sorted.data(), n))] -= term;
      else r[form_index(std::span<const int>(sorted.data(), n))] += term;
    }
  }
  return r;
}

// d alpha from component jets; the result is evaluated at the expansion point.
FormValue exterior_derivative(const FormJet& alpha);
// Same, kept as jets one order lower (for d^2 checks).
FormJet exterior_derivative_jets(const FormJet& alpha);

// alpha(v_1, ..., v_k).
double evaluate_form(const FormValue& alpha, std::span<const Vec<kFormDim>> vectors);

double max_abs(const FormValue& f);

}  // namespace tw
