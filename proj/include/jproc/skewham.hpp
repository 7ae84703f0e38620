#pragma once

// Normal skew J-Hamiltonian Procrustes problem. A is skew J-Hamiltonian
// exactly when iA is J-Hamiltonian, and ||At - A|| = ||i At - i A||, so the
// problem is the Hamiltonian solve on (i At, i D) followed by A = -i B.

#include "jproc/ham.hpp"

namespace jproc::skewham {

template <typename Real>
SolveOutcome<Real> solve(const JStructure<Real> &js, const CMatrix<Real> &x, const CMatrix<Real> &d,
                         const CMatrix<Real> &at, const Tolerance<Real> &tol = {},
                         const SolveOptions<Real> &opts = {}) {
  using C = std::complex<Real>;
  const C i(0, 1);
  const CMatrix<Real> d_rot = i * d;
  const CMatrix<Real> at_rot = i * at;
  auto inner = ham::solve(js, x, d_rot, at_rot, tol, opts);
  if (auto *bad = std::get_if<Infeasible<Real>>(&inner)) {
    bad->report.hermitian_flavor = true;
    return inner;
  }
  auto sol = std::get<Solution<Real>>(std::move(inner));
  sol.a_hat = -i * sol.b_hat;
  sol.residual = (at - sol.a_hat).norm();
  sol.eigen_residual = (sol.a_hat * x - x * d).norm();
  sol.report.hermitian_flavor = true;
  return sol;
}

/// General normal skew J-Hamiltonian solution of AX = XD:
///   A = U [[A11, A12], [-A12^*, A22]] U^*
/// with Y11, Y22 hermitian and Y12 arbitrary.
template <typename Real>
GeneralResult<Real> general_solution(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                     const CMatrix<Real> &y11, const CMatrix<Real> &y12,
                                     const CMatrix<Real> &y22, const Tolerance<Real> &tol = {}) {
  detail::require_free_blocks(bd, y11, y12, y22, true, tol);
  if (d.rows() != bd.m() || d.cols() != bd.m())
    throw ShapeError("D: expected " + std::to_string(bd.m()) + "x" + std::to_string(bd.m()));
  const Real atol = tol.structure_atol;
  const CMatrix<Real> x1h = bd.x1.adjoint();
  const CMatrix<Real> x2h = bd.x2.adjoint();
  const CMatrix<Real> x1d = bd.x1 * d;
  const CMatrix<Real> x2d = bd.x2 * d;
  const CMatrix<Real> base12 = x1d * bd.p * bd.x2p_pinv;
  const CMatrix<Real> y12q = y12 * bd.q;

  const CMatrix<Real> t1 = base12 * bd.x2;
  const CMatrix<Real> t2 = y12q * bd.x2;
  const CMatrix<Real> top = x1d - t1 - t2;
  const CMatrix<Real> s1 = bd.x2p_pinv.adjoint() * bd.p * d.adjoint() * x1h * bd.x1;
  const CMatrix<Real> s2 = y12q.adjoint() * bd.x1;
  const CMatrix<Real> bottom = x2d + s1 + s2;

  const CMatrix<Real> a12 = base12 + y12q;
  const CMatrix<Real> a11 =
      top * bd.x1_pinv - bd.x1_pinv.adjoint() * x2h * y12q.adjoint() * bd.r + bd.r * y11 * bd.r;
  const CMatrix<Real> a22 =
      bottom * bd.x2_pinv +
      bd.x2_pinv.adjoint() * (x1h * bd.x1 * d * bd.p * bd.x2p_pinv - x1h * y12q) * bd.s +
      bd.s * y22 * bd.s;

  const CMatrix<Real> g1 = x1h * bd.x1 * d;
  const CMatrix<Real> g2 = x2h * bd.x2 * d;
  const CMatrix<Real> gram = g1 - g2;

  const auto violation = detail::first_violation<Real>({
      {"cond1", detail::measure<Real>((x1d - a12 * bd.x2) * bd.p, x1d.norm() + (a12 * bd.x2).norm(), atol)},
      {"cond2", detail::measure<Real>(top * bd.p, x1d.norm() + t1.norm() + t2.norm(), atol)},
      {"cond3", detail::measure<Real>(bottom * bd.t, x2d.norm() + s1.norm() + s2.norm(), atol)},
      {"hermitian", detail::measure<Real>(gram - gram.adjoint(), 2 * (g1.norm() + g2.norm()), atol)},
      {"commute", commutation(a11, a12, a22, tol)},
  });
  if (violation)
    return *violation;
  return assemble<Real>(bd.u, a11, a12, CMatrix<Real>(-a12.adjoint()), a22);
}

} // namespace jproc::skewham
