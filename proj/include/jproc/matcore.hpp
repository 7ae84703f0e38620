#pragma once

// Dense complex matrix helpers: SVD pseudoinverse, the two orthogonal
// projectors built from it, Frobenius geometry and structure predicates.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "jproc/core.hpp"

namespace jproc {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z)))
        return false;
    }
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived> &m, const std::string &what) {
  if (!all_finite(m))
    throw NumericalError(what + ": non-finite entry");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived> &m, const std::string &what) {
  if (m.rows() != m.cols())
    throw ShapeError(what + ": expected a square matrix, got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
}

template <typename Derived>
typename Derived::RealScalar fro_norm(const Eigen::MatrixBase<Derived> &m) {
  return m.norm();
}

/// Largest entry magnitude (0 for an empty matrix).
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived> &m) {
  if (m.size() == 0)
    return 0;
  return m.cwiseAbs().maxCoeff();
}

/// Entrywise |a - b| <= atol * (1 + max(|a|_max, |b|_max)).
template <typename DA, typename DB>
bool entrywise_close(const Eigen::MatrixBase<DA> &a, const Eigen::MatrixBase<DB> &b,
                     typename DA::RealScalar atol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return false;
  if (a.size() == 0)
    return true;
  const auto scale = 1 + std::max(max_abs(a), max_abs(b));
  return max_abs(a - b) <= atol * scale;
}

template <typename Derived>
using PlainOf = typename Derived::PlainObject;

template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1>
singular_values(const Eigen::MatrixBase<Derived> &m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.size() == 0)
    return {};
  Eigen::JacobiSVD<Plain> svd{Plain(m)};
  if (svd.info() != Eigen::Success)
    throw NumericalError("SVD did not converge");
  return svd.singularValues();
}

/// Numerical rank: singular values above rank_cutoff * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived> &m,
                            typename Derived::RealScalar rank_cutoff) {
  const auto sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0)
    return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_cutoff * sv(0))
      ++r;
  return r;
}

/// True when sigma_min > rel * sigma_max over min(rows, cols) singular values
/// and the matrix is not zero.
template <typename Derived>
bool well_conditioned(const Eigen::MatrixBase<Derived> &m, typename Derived::RealScalar rel) {
  const auto sv = singular_values(m);
  if (sv.size() == 0)
    return true;
  return sv(0) > 0 && sv(sv.size() - 1) > rel * sv(0);
}

/// Moore-Penrose inverse through a thin SVD. Singular values at or below
/// tol.rank_cutoff * max(sigma_max, scale) count as zero; pass the norm of the
/// data a derived matrix came from as scale so pure rounding noise is not inverted.
template <typename Derived, typename Real = typename Derived::RealScalar>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pinv(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}, Real scale = 0) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require_finite(m, "pinv");
  Plain result = Plain::Zero(m.cols(), m.rows());
  if (m.size() == 0)
    return result;
  Eigen::JacobiSVD<Plain> svd(Plain(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericalError("pinv: SVD did not converge");
  const auto &sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0)
    return result;
  const Real cutoff = tol.rank_cutoff * std::max(sv(0), scale);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff)
      break;
    result.noalias() += (svd.matrixV().col(i) / sv(i)) * svd.matrixU().col(i).adjoint();
  }
  return result;
}

/// Q_M = I - M^+ M, the orthogonal projector onto ker(M).
template <typename Derived, typename Real = typename Derived::RealScalar>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
proj_q(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return Plain::Identity(m.cols(), m.cols()) - pinv(m, tol) * m;
}

/// P_M = I - M M^+, the orthogonal projector onto range(M)^perp.
template <typename Derived, typename Real = typename Derived::RealScalar>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
proj_p(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return Plain::Identity(m.rows(), m.rows()) - m * pinv(m, tol);
}

template <typename Derived, typename Real = typename Derived::RealScalar>
bool is_hermitian(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}) {
  require_square(m, "is_hermitian");
  return entrywise_close(m, m.adjoint(), tol.structure_atol);
}

template <typename Derived, typename Real = typename Derived::RealScalar>
bool is_skew_hermitian(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}) {
  require_square(m, "is_skew_hermitian");
  return entrywise_close(m, -m.adjoint(), tol.structure_atol);
}

template <typename Derived, typename Real = typename Derived::RealScalar>
bool is_normal(const Eigen::MatrixBase<Derived> &m, const Tolerance<Real> &tol = {}) {
  require_square(m, "is_normal");
  const PlainOf<Derived> a = m;
  return entrywise_close(a * a.adjoint(), a.adjoint() * a, tol.structure_atol);
}

/// Hermitian idempotent at tolerance.
template <typename Derived, typename Real = typename Derived::RealScalar>
bool is_orthogonal_projector(const Eigen::MatrixBase<Derived> &p, const Tolerance<Real> &tol = {}) {
  if (p.rows() != p.cols())
    return false;
  const PlainOf<Derived> a = p;
  return is_hermitian(a, tol) && entrywise_close(a * a, a, tol.structure_atol);
}

/// ||B - P1 B P2||_F, the least value of ||B - P1 E P2||_F over all E when P1
/// and P2 are orthogonal projectors.
template <typename DB, typename D1, typename D2, typename Real = typename DB::RealScalar>
Real lemma1_min_norm(const Eigen::MatrixBase<DB> &b, const Eigen::MatrixBase<D1> &p1,
                     const Eigen::MatrixBase<D2> &p2, const Tolerance<Real> &tol = {}) {
  if (p1.rows() != b.rows() || p2.cols() != b.cols())
    throw ShapeError("lemma1_min_norm: projectors not conformable with B");
  if (!is_orthogonal_projector(p1, tol) || !is_orthogonal_projector(p2, tol))
    throw PreconditionError("lemma1_min_norm: P1 and P2 must be hermitian idempotents");
  return (b - p1 * b * p2).norm();
}

} // namespace jproc
