#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jproc {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using ComplexMatrix = CMatrix<double>;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch, non-square or odd-sized input.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// J fails J^2 = -I or normality.
class StructureError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Non-finite data or a factorization that did not converge.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// I + M is singular at tolerance (Cayley transform undefined).
class SingularityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Thresholds used by rank decisions and by every structure/condition check.
///
/// rank_cutoff is relative to the largest singular value of X (or of the
/// matrix itself, when larger); structure_atol is
/// the base entrywise threshold, scaled by the magnitude of the data where
/// a check involves products.
template <typename Real = double>
struct Tolerance {
  Real rank_cutoff = Real(1e-10);
  Real structure_atol = Real(1e-9);

  void validate() const {
    if (!(rank_cutoff > 0 && rank_cutoff < 1))
      throw PreconditionError("tolerance: rank_cutoff must lie in (0, 1)");
    if (!(structure_atol > 0 && structure_atol < 1))
      throw PreconditionError("tolerance: structure_atol must lie in (0, 1)");
  }
};

/// Relative threshold on sigma_min(I + M) for the Cayley transform.
inline constexpr double kCayleyCutoff = 1e-8;

enum class StructureMode { Hamiltonian, SkewHamiltonian, Symplectic };

inline std::string to_string(StructureMode mode) {
  switch (mode) {
  case StructureMode::Hamiltonian:
    return "hamiltonian";
  case StructureMode::SkewHamiltonian:
    return "skew_hamiltonian";
  case StructureMode::Symplectic:
    return "symplectic";
  }
  return "unknown";
}

inline StructureMode parse_mode(const std::string &name) {
  if (name == "hamiltonian")
    return StructureMode::Hamiltonian;
  if (name == "skew_hamiltonian")
    return StructureMode::SkewHamiltonian;
  if (name == "symplectic")
    return StructureMode::Symplectic;
  throw PreconditionError("unknown mode '" + name + "'");
}

} // namespace jproc
