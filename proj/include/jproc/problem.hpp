#pragma once

#include <cstdint>
#include <optional>

#include "jproc/ham.hpp"
#include "jproc/skewham.hpp"
#include "jproc/symplectic.hpp"

namespace jproc {

/// One Procrustes problem: the structure J, eigenpairs (X, D), the target
/// A_tilde and the structure class to search.
template <typename Real = double>
struct ProblemInstance {
  StructureMode mode = StructureMode::Hamiltonian;
  CMatrix<Real> j, x, d, a_tilde;
  Tolerance<Real> tol;
  std::optional<std::uint64_t> audit_samples;
  std::optional<std::uint64_t> seed;
  bool allow_rank_deficient_x = false;

  SolveOptions<Real> options() const { return {allow_rank_deficient_x}; }

  /// Dimensions, finiteness, diagonal D and (unless allowed) full column
  /// rank of X. Throws the library error describing the first problem.
  void validate() const {
    tol.validate();
    detail::validate_j(j, tol);
    if (x.rows() != j.rows() || x.cols() == 0)
      throw ShapeError("X: expected " + std::to_string(j.rows()) + " rows and at least one column");
    require_finite(x, "X");
    if (d.rows() != x.cols() || d.cols() != x.cols())
      throw ShapeError("D: expected " + std::to_string(x.cols()) + "x" + std::to_string(x.cols()));
    diagonal_entries(d, tol);
    if (a_tilde.rows() != j.rows() || a_tilde.cols() != j.cols())
      throw ShapeError("A_tilde: expected " + std::to_string(j.rows()) + "x" + std::to_string(j.rows()));
    require_finite(a_tilde, "A_tilde");
    if (!allow_rank_deficient_x && numerical_rank(x, tol.rank_cutoff) != x.cols())
      throw PreconditionError("X not full column rank");
  }
};

template <typename Real>
SolveOutcome<Real> solve(const JStructure<Real> &js, const ProblemInstance<Real> &inst) {
  switch (inst.mode) {
  case StructureMode::Hamiltonian:
    return ham::solve(js, inst.x, inst.d, inst.a_tilde, inst.tol, inst.options());
  case StructureMode::SkewHamiltonian:
    return skewham::solve(js, inst.x, inst.d, inst.a_tilde, inst.tol, inst.options());
  case StructureMode::Symplectic:
    return symplectic::solve(js, inst.x, inst.d, inst.a_tilde, inst.tol, inst.options());
  }
  throw PreconditionError("unknown mode");
}

template <typename Real>
SolveOutcome<Real> solve(const ProblemInstance<Real> &inst) {
  inst.validate();
  return solve(JStructure<Real>::build(inst.j, inst.tol), inst);
}

} // namespace jproc
