#pragma once

// Fixed-size dense helpers templated on the scalar (double or Jet).

#include <array>
#include <cmath>
#include <cstddef>

#include "tw/errors.hpp"
#include "tw/jets.hpp"

namespace tw {

template <class T, std::size_t N>
using VecT = std::array<T, N>;
template <class T, std::size_t N>
using MatT = std::array<std::array<T, N>, N>;

template <std::size_t N>
using Vec = VecT<double, N>;
template <std::size_t N>
using Mat = MatT<double, N>;

using Point4 = Vec<4>;
using Vec3 = Vec<3>;
using Mat4 = Mat<4>;
using Mat6 = Mat<6>;

template <class T, std::size_t N>
MatT<T, N> zero_matrix() {
  MatT<T, N> m;
  for (auto& row : m) row.fill(T(0.0));
  return m;
}

template <class T, std::size_t N>
MatT<T, N> identity_matrix() {
  auto m = zero_matrix<T, N>();
  for (std::size_t i = 0; i < N; ++i) m[i][i] = T(1.0);
  return m;
}

template <class T, std::size_t N>
MatT<T, N> matmul(const MatT<T, N>& a, const MatT<T, N>& b) {
  auto r = zero_matrix<T, N>();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

template <class T, std::size_t N>
VecT<T, N> matvec(const MatT<T, N>& a, const VecT<T, N>& v) {
  VecT<T, N> r;
  r.fill(T(0.0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i] += a[i][j] * v[j];
  return r;
}

template <class T, std::size_t N>
MatT<T, N> transpose(const MatT<T, N>& a) {
  MatT<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i][j] = a[j][i];
  return r;
}

// Gauss-Jordan with partial pivoting on the degree-0 values.
template <class T, std::size_t N>
MatT<T, N> inverse(MatT<T, N> a) {
  auto inv = identity_matrix<T, N>();
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    double best = std::abs(value_of(a[col][col]));
    for (std::size_t r = col + 1; r < N; ++r) {
      const double v = std::abs(value_of(a[r][col]));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300) throw GeometryError("singular matrix in inverse");
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const T d = T(1.0) / a[col][col];
    for (std::size_t j = 0; j < N; ++j) {
      a[col][j] = a[col][j] * d;
      inv[col][j] = inv[col][j] * d;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const T f = a[r][col];
      for (std::size_t j = 0; j < N; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

template <class T, std::size_t N>
MatT<double, N> values_of(const MatT<T, N>& a) {
  MatT<double, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i][j] = value_of(a[i][j]);
  return r;
}

template <class T, std::size_t N>
VecT<double, N> values_of(const VecT<T, N>& a) {
  VecT<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = value_of(a[i]);
  return r;
}

// Cholesky succeeds iff the symmetric matrix is positive definite.
template <std::size_t N>
bool is_positive_definite(const Mat<N>& a) {
  Mat<N> l{};
  for (std::size_t j = 0; j < N; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!(d > 0.0)) return false;
    l[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < N; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  return true;
}

template <std::size_t N>
double determinant(Mat<N> a) {
  double det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(a[col], a[piv]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < N; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

template <class T>
VecT<T, 3> cross(const VecT<T, 3>& a, const VecT<T, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

template <class T, std::size_t N>
T dot(const VecT<T, N>& a, const VecT<T, N>& b) {
  T s(0.0);
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
double max_abs(const Mat<N>& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace tw
