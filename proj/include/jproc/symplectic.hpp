#pragma once

// Normal J-symplectic Procrustes problem through the Cayley transform
// A^C = (I - A)(I + A)^{-1}, which maps normal J-symplectic matrices without
// eigenvalue -1 onto normal J-Hamiltonian ones and back.

#include "jproc/ham.hpp"

namespace jproc {

/// (I - A)(I + A)^{-1}. Throws SingularityError when I + A is singular at
/// the relative cutoff kCayleyCutoff.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
cayley(const Eigen::MatrixBase<Derived> &a) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Derived::RealScalar;
  require_square(a, "cayley");
  require_finite(a, "cayley");
  const Plain id = Plain::Identity(a.rows(), a.cols());
  const Plain plus = id + a;
  if (!well_conditioned(plus, Real(kCayleyCutoff)))
    throw SingularityError("cayley: -1 is an eigenvalue (I + A singular)");
  // (I - A) and (I + A)^{-1} commute, so solve (I + A) Y = (I - A)
  return plus.partialPivLu().solve(Plain(id - a));
}

namespace symplectic {

template <typename Real>
SolveOutcome<Real> solve(const JStructure<Real> &js, const CMatrix<Real> &x, const CMatrix<Real> &d,
                         const CMatrix<Real> &at, const Tolerance<Real> &tol = {},
                         const SolveOptions<Real> &opts = {}) {
  detail::validate_problem(js, x, d, at, tol);
  const CMatrix<Real> d_c = cayley(d);
  auto inner = ham::solve(js, x, d_c, at, tol, opts);
  if (std::holds_alternative<Infeasible<Real>>(inner))
    return inner;
  auto sol = std::get<Solution<Real>>(std::move(inner));
  sol.a_hat = cayley(sol.b_hat);
  sol.residual = (at - sol.a_hat).norm();
  sol.eigen_residual = (sol.a_hat * x - x * d).norm();
  return sol;
}

/// General normal J-symplectic solution of AX = XD: the Cayley transform of
/// the general J-Hamiltonian solution for D^C, written blockwise as
///   U [[I - A11, -A12], [-A12^*, I - A22]] [[I + A11, A12], [A12^*, I + A22]]^{-1} U^*.
template <typename Real>
GeneralResult<Real> general_solution(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                     const CMatrix<Real> &y11, const CMatrix<Real> &y12,
                                     const CMatrix<Real> &y22, const Tolerance<Real> &tol = {}) {
  const CMatrix<Real> d_c = cayley(d);
  auto blocks = ham::general_blocks(bd, d_c, y11, y12, y22, tol);
  if (blocks.violation)
    return *blocks.violation;
  const auto k = bd.k();
  const CMatrix<Real> ik = CMatrix<Real>::Identity(k, k);
  CMatrix<Real> minus(2 * k, 2 * k), plus(2 * k, 2 * k);
  minus << ik - blocks.a11, -blocks.a12, -blocks.a12.adjoint(), ik - blocks.a22;
  plus << ik + blocks.a11, blocks.a12, blocks.a12.adjoint(), ik + blocks.a22;
  if (!well_conditioned(plus, Real(kCayleyCutoff)))
    throw SingularityError("symplectic general solution: I + A^C singular");
  // minus and plus commute (both are polynomials in the same block matrix)
  const CMatrix<Real> inner = plus.partialPivLu().solve(minus);
  return CMatrix<Real>(bd.u * inner * bd.u.adjoint());
}

} // namespace symplectic
} // namespace jproc
