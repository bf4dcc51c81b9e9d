#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "poncelet/field.hpp"

namespace poncelet {

template <Field K>
using Vec3 = std::array<K, 3>;

template <Field K>
using Mat3 = std::array<std::array<K, 3>, 3>;

template <Field K>
Mat3<K> identity3() {
  Mat3<K> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = K(i == j ? 1 : 0);
  return m;
}

template <Field K>
Vec3<K> mul(const Mat3<K>& m, const Vec3<K>& v) {
  Vec3<K> out;
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

template <Field K>
Mat3<K> mul(const Mat3<K>& a, const Mat3<K>& b) {
  Mat3<K> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

template <Field K>
Mat3<K> transpose(const Mat3<K>& m) {
  Mat3<K> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = m[j][i];
  return out;
}

template <Field K>
K det3(const Mat3<K>& m) {
  K d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
  d -= m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]);
  d += m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return d;
}

template <Field K>
Mat3<K> adjugate3(const Mat3<K>& m) {
  Mat3<K> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return a;
}

template <Field K>
Mat3<K> inverse3(const Mat3<K>& m) {
  K d = det3(m);
  if (is_zero(d)) throw std::domain_error("singular 3x3 matrix");
  Mat3<K> a = adjugate3(m);
  for (auto& row : a)
    for (auto& x : row) x /= d;
  return a;
}

template <Field K>
K dot(const Vec3<K>& a, const Vec3<K>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <Field K>
Vec3<K> cross(const Vec3<K>& a, const Vec3<K>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Row-major dense matrix over any field.
template <Field K>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<K> column(std::size_t j) const {
    std::vector<K> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> data_;
};

/// Result of exact Gauss-Jordan elimination.
struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

/// Reduces `m` in place to reduced row echelon form (exact arithmetic).
inline Echelon reduce_row_echelon(DenseMatrix<Rational>& m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && sgn(m(piv, col)) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      Rational factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    e.pivot_columns.push_back(col);
    ++row;
  }
  e.rank = row;
  return e;
}

inline std::size_t exact_rank(DenseMatrix<Rational> m) { return reduce_row_echelon(m).rank; }

/// Basis of the right nullspace {x : m x = 0}.
inline std::vector<std::vector<Rational>> exact_nullspace(DenseMatrix<Rational> m) {
  Echelon e = reduce_row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_columns) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(m.cols(), Rational(0));
    x[free] = 1;
    for (std::size_t r = 0; r < e.rank; ++r) x[e.pivot_columns[r]] = -m(r, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Solves the square system a x = b exactly; throws if `a` is singular.
inline std::vector<Rational> exact_solve(const DenseMatrix<Rational>& a, const std::vector<Rational>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("exact_solve: shape mismatch");
  DenseMatrix<Rational> aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  Echelon e = reduce_row_echelon(aug);
  if (e.rank < n || e.pivot_columns.back() == n) throw std::domain_error("exact_solve: singular system");
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

}  // namespace poncelet
