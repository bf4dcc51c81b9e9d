#pragma once

// Deciding whether a curve is a Poncelet curve of a conic.
//
// Pull the curve back along (t1, t2) -> tangent_meet(t1, t2) to a symmetric
// biform G, multiply by u1 v2 - u2 v1 and read off the antisymmetric
// (c+2) x (c+2) coefficient matrix M. The curve comes from a pencil (f, g)
// exactly when M = f g^T - g f^T, i.e. when M has rank 2; the column space
// of M is then the pencil.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

#include "poncelet/construction.hpp"
#include "poncelet/field.hpp"
#include "poncelet/forms.hpp"
#include "poncelet/geometry.hpp"

namespace poncelet {

template <Field K>
struct MembershipVerdict {
  bool is_poncelet = false;
  int rank = 0;
  /// sigma_3 / sigma_1 of the membership matrix (0 in exact mode when rank <= 2).
  double residual = 0.0;
  std::optional<Pencil<K>> pencil;
  /// Empty unless the verdict is degenerate (M = 0).
  std::string reason;
};

/// G(t1, t2) = C(T (2 u1 u2, u1 v2 + u2 v1, 2 v1 v2)) as a symmetric biform.
template <Field K>
SymBiForm<K> pullback_biform(const ConicFrame<K>& frame, const PlaneCurve<K>& curve) {
  if (curve.chart != frame.chart()) throw std::invalid_argument("chart mismatch between conic and curve");
  const Mat3<K>& t = frame.transform();
  auto row = [&](int m) { return Vec3<K>{K(2) * t[m][0], t[m][1], K(2) * t[m][2]}; };
  SymReduced<K> reduced{substitute_linear(curve.form, row(0), row(1), row(2))};
  return expand(reduced);
}

/// Coefficient matrix of (u1 v2 - u2 v1) G, of size (c+2) x (c+2).
template <Field K>
DenseMatrix<K> antisym_matrix(const SymBiForm<K>& g) {
  const int n = g.c + 2;
  DenseMatrix<K> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      K value(0);
      if (i >= 1 && j <= g.c) value += g.b(i - 1, j);
      if (j >= 1 && i <= g.c) value -= g.b(i, j - 1);
      m(i, j) = value;
    }
  return m;
}

namespace detail {

template <Field K>
using EigenMat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;

template <Field K>
EigenMat<K> to_eigen(const DenseMatrix<K>& m) {
  EigenMat<K> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace detail

/// Singular values of a float membership matrix, in decreasing order.
template <Field K>
Eigen::VectorXd membership_singular_values(const DenseMatrix<K>& m) {
  Eigen::JacobiSVD<detail::EigenMat<K>> svd(detail::to_eigen(m));
  return svd.singularValues();
}

/// Exact mode decides by exact rank; float mode by sigma_3 / sigma_1 < tol.
template <Field K>
MembershipVerdict<K> is_poncelet(const ConicFrame<K>& frame, const PlaneCurve<K>& curve, double tol = 1e-8) {
  if (curve.degree() < 1) throw std::invalid_argument("is_poncelet: curve degree must be at least 1");
  const SymBiForm<K> g = pullback_biform(frame, curve);
  const DenseMatrix<K> m = antisym_matrix(g);
  MembershipVerdict<K> verdict;
  if constexpr (is_exact_v<K>) {
    DenseMatrix<Rational> work = m;
    const Echelon e = reduce_row_echelon(work);
    verdict.rank = static_cast<int>(e.rank);
    if (e.rank == 0) {
      verdict.reason = "membership matrix vanishes: the pullback is identically zero";
      return verdict;
    }
    if (e.rank == 2) {
      verdict.is_poncelet = true;
      verdict.pencil = Pencil<Rational>(BinaryForm<Rational>(m.column(e.pivot_columns[0])),
                                        BinaryForm<Rational>(m.column(e.pivot_columns[1])));
    }
    // Antisymmetric ranks are even; residual stays 0 for rank 2 and is not
    // defined beyond a float approximation otherwise.
    if (e.rank > 2) {
      Eigen::MatrixXd md(m.rows(), m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) md(i, j) = m(i, j).get_d();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(md);
      verdict.residual = svd.singularValues()(2) / svd.singularValues()(0);
    }
    return verdict;
  } else {
    // Tangent meets cover the plane, so the pullback of a nonzero curve never
    // vanishes identically; only an exactly zero matrix is degenerate.
    double gmax = 0.0;
    for (int i = 0; i <= g.c; ++i)
      for (int j = 0; j <= g.c; ++j) gmax = std::max(gmax, magnitude(g.b(i, j)));
    if (!(gmax > 0.0)) {
      verdict.reason = "membership matrix vanishes: the pullback is identically zero";
      return verdict;
    }
    Eigen::JacobiSVD<detail::EigenMat<K>> svd(detail::to_eigen(m), Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    verdict.residual = sv(2) / sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++rank;
    verdict.rank = rank;
    if (verdict.residual < tol) {
      verdict.is_poncelet = true;
      auto col = [&](int k) {
        std::vector<K> c(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) c[i] = svd.matrixU()(i, k);
        return BinaryForm<K>(std::move(c));
      };
      verdict.pencil = Pencil<K>(col(0), col(1));
    }
    return verdict;
  }
}

}  // namespace poncelet
