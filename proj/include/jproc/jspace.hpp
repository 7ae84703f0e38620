#pragma once

// The structure matrix J, its unitary diagonalizer U, and everything that
// is expressed in the basis U: the row partition of X, the tiles of the
// target, and the projectors the solvers are built from.

#include <cmath>
#include <utility>
#include <vector>

#include "jproc/core.hpp"
#include "jproc/matcore.hpp"

namespace jproc {

namespace detail {

// Make the first entry of (near-)largest magnitude real positive.
template <typename Real>
void normalize_phase(CMatrix<Real> &v) {
  const Real peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1 - Real(1e-12))) {
      const auto phase = std::conj(v(i)) / std::abs(v(i));
      v *= phase;
      v(i) = std::complex<Real>(std::abs(v(i)), 0);
      return;
    }
  }
}

// Orthonormal basis of range(proj) by Gram-Schmidt with column pivoting:
// each step takes the column with the largest remaining norm, ties going to
// the lowest index.
template <typename Real>
CMatrix<Real> range_basis(const CMatrix<Real> &proj, Eigen::Index k) {
  const Eigen::Index n = proj.rows();
  CMatrix<Real> residual = proj;
  CMatrix<Real> basis(n, k);
  for (Eigen::Index step = 0; step < k; ++step) {
    const auto norms = residual.colwise().norm().eval();
    const Real best = norms.maxCoeff();
    Eigen::Index pick = 0;
    while (norms(pick) < best * (1 - Real(1e-12)))
      ++pick;
    CMatrix<Real> v = residual.col(pick) / norms(pick);
    // second pass keeps the basis orthonormal to working precision
    if (step > 0) {
      const auto prev = basis.leftCols(step);
      v -= prev * (prev.adjoint() * v);
      v /= v.norm();
    }
    normalize_phase<Real>(v);
    basis.col(step) = v;
    residual -= v * (v.adjoint() * residual);
  }
  return basis;
}

template <typename Real>
CMatrix<Real> canonical_diagonal(Eigen::Index k) {
  using C = std::complex<Real>;
  CMatrix<Real> d = CMatrix<Real>::Zero(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    d(i, i) = C(0, 1);
    d(k + i, k + i) = C(0, -1);
  }
  return d;
}

template <typename Real>
void validate_j(const CMatrix<Real> &j, const Tolerance<Real> &tol) {
  require_square(j, "J");
  if (j.rows() == 0 || j.rows() % 2 != 0)
    throw ShapeError("J: dimension must be even and positive, got " + std::to_string(j.rows()));
  require_finite(j, "J");
  const auto n = j.rows();
  if (!entrywise_close(j * j, -CMatrix<Real>::Identity(n, n), tol.structure_atol))
    throw StructureError("J: J^2 = -I violated");
  if (!is_normal(j, tol))
    throw StructureError("J: not normal");
}

} // namespace detail

/// A validated J = U (iI_k (+) -iI_k) U^* with n = 2k.
template <typename Real = double>
class JStructure {
public:
  using Matrix = CMatrix<Real>;

  /// Computes U from the spectral projectors (I -/+ iJ)/2. Deterministic.
  static JStructure build(const Matrix &j, const Tolerance<Real> &tol = {}) {
    tol.validate();
    detail::validate_j(j, tol);
    using C = std::complex<Real>;
    const Eigen::Index n = j.rows();
    const Eigen::Index k = n / 2;
    const Matrix id = Matrix::Identity(n, n);
    const Matrix plus = (id - C(0, 1) * j) / Real(2);
    const Matrix minus = (id + C(0, 1) * j) / Real(2);
    // trace of a projector is its rank
    const Real plus_rank = plus.trace().real();
    if (std::abs(plus_rank - Real(k)) > Real(0.5))
      throw StructureError("J: the +i and -i eigenspaces must have equal dimension");
    Matrix u(n, n);
    u.leftCols(k) = detail::range_basis<Real>(plus, k);
    u.rightCols(k) = detail::range_basis<Real>(minus, k);
    return JStructure(j, std::move(u), tol);
  }

  /// Uses a caller-supplied U; fails unless U is unitary and U^* J U is the
  /// canonical diagonal.
  static JStructure with_unitary(const Matrix &j, const Matrix &u, const Tolerance<Real> &tol = {}) {
    tol.validate();
    detail::validate_j(j, tol);
    if (u.rows() != j.rows() || u.cols() != j.cols())
      throw ShapeError("U: must have the same shape as J");
    require_finite(u, "U");
    return JStructure(j, u, tol);
  }

  const Matrix &j() const { return j_; }
  const Matrix &u() const { return u_; }
  Eigen::Index n() const { return j_.rows(); }
  Eigen::Index k() const { return j_.rows() / 2; }

private:
  JStructure(Matrix j, Matrix u, const Tolerance<Real> &tol) : j_(std::move(j)), u_(std::move(u)) {
    const Eigen::Index n = j_.rows();
    if (!entrywise_close(u_.adjoint() * u_, Matrix::Identity(n, n), tol.structure_atol))
      throw StructureError("U: not unitary");
    if (!entrywise_close(u_.adjoint() * j_ * u_, detail::canonical_diagonal<Real>(n / 2),
                         tol.structure_atol))
      throw StructureError("U: U^* J U is not diag(iI, -iI)");
  }

  Matrix j_;
  Matrix u_;
};

template <typename Real>
JStructure<Real> build_jstructure(const CMatrix<Real> &j, const Tolerance<Real> &tol = {}) {
  return JStructure<Real>::build(j, tol);
}

template <typename Real>
struct RowPartition {
  CMatrix<Real> x1;
  CMatrix<Real> x2;
};

/// Top and bottom k x m blocks of U^* X. X must have full column rank unless
/// allow_rank_deficient is set.
template <typename Real>
RowPartition<Real> partition_x(const JStructure<Real> &js, const CMatrix<Real> &x,
                               const Tolerance<Real> &tol = {}, bool allow_rank_deficient = false) {
  if (x.rows() != js.n() || x.cols() == 0)
    throw ShapeError("X: expected " + std::to_string(js.n()) + " rows and at least one column, got " +
                     std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  require_finite(x, "X");
  if (!allow_rank_deficient && numerical_rank(x, tol.rank_cutoff) != x.cols())
    throw PreconditionError("X not full column rank");
  const CMatrix<Real> ux = js.u().adjoint() * x;
  const auto k = js.k();
  return {ux.topRows(k), ux.bottomRows(k)};
}

template <typename Real>
struct TargetBlocks {
  CMatrix<Real> a11, a12, a21, a22;
};

/// The four k x k tiles of U^* At U.
template <typename Real>
TargetBlocks<Real> block_target(const JStructure<Real> &js, const CMatrix<Real> &at) {
  if (at.rows() != js.n() || at.cols() != js.n())
    throw ShapeError("A_tilde: expected " + std::to_string(js.n()) + "x" + std::to_string(js.n()));
  require_finite(at, "A_tilde");
  const CMatrix<Real> b = js.u().adjoint() * at * js.u();
  const auto k = js.k();
  return {b.topLeftCorner(k, k), b.topRightCorner(k, k), b.bottomLeftCorner(k, k),
          b.bottomRightCorner(k, k)};
}

/// Partitioned data and the projectors used by steps 2-5 and 11.
///
///   p = Q_{X1}            t = Q_{X2}
///   l = Q_{X2 p}          q = P_{X2 p}
///   r = P_{X1}            s = P_{X2}
template <typename Real = double>
struct BlockData {
  CMatrix<Real> u;
  CMatrix<Real> x1, x2;
  CMatrix<Real> at11, at12, at21, at22;
  CMatrix<Real> p, t, l, q, r, s;
  CMatrix<Real> x1_pinv, x2_pinv;
  CMatrix<Real> x2p;      // X2 p
  CMatrix<Real> x2p_pinv; // (X2 p)^+; its adjoint is (p X2^*)^+

  Eigen::Index k() const { return x1.rows(); }
  Eigen::Index m() const { return x1.cols(); }
};

template <typename Real>
BlockData<Real> make_block_data(const JStructure<Real> &js, const CMatrix<Real> &x,
                                const CMatrix<Real> &at, const Tolerance<Real> &tol = {},
                                bool allow_rank_deficient = false) {
  auto [x1, x2] = partition_x(js, x, tol, allow_rank_deficient);
  auto tiles = block_target(js, at);
  BlockData<Real> bd;
  bd.u = js.u();
  // X1, X2 and X2 P are slices of X: rank decisions are taken on X's scale
  const Real scale = singular_values(x)(0);
  bd.x1_pinv = pinv(x1, tol, scale);
  bd.x2_pinv = pinv(x2, tol, scale);
  const Eigen::Index m = x.cols();
  const Eigen::Index k = js.k();
  const CMatrix<Real> im = CMatrix<Real>::Identity(m, m);
  const CMatrix<Real> ik = CMatrix<Real>::Identity(k, k);
  bd.p = im - bd.x1_pinv * x1;
  bd.t = im - bd.x2_pinv * x2;
  bd.x2p = x2 * bd.p;
  bd.x2p_pinv = pinv(bd.x2p, tol, scale);
  bd.l = im - bd.x2p_pinv * bd.x2p;
  bd.q = ik - bd.x2p * bd.x2p_pinv;
  bd.r = ik - x1 * bd.x1_pinv;
  bd.s = ik - x2 * bd.x2_pinv;
  bd.x1 = std::move(x1);
  bd.x2 = std::move(x2);
  bd.at11 = std::move(tiles.a11);
  bd.at12 = std::move(tiles.a12);
  bd.at21 = std::move(tiles.a21);
  bd.at22 = std::move(tiles.a22);
  return bd;
}

/// U [[b11, b12], [b21, b22]] U^*.
template <typename Real>
CMatrix<Real> assemble(const CMatrix<Real> &u, const CMatrix<Real> &b11, const CMatrix<Real> &b12,
                       const CMatrix<Real> &b21, const CMatrix<Real> &b22) {
  const auto k = b11.rows();
  CMatrix<Real> b(2 * k, 2 * k);
  b << b11, b12, b21, b22;
  return u * b * u.adjoint();
}

/// Normal and structured in the given mode; symplectic additionally needs
/// I + A nonsingular.
template <typename Real>
bool is_member(const CMatrix<Real> &a, const JStructure<Real> &js, StructureMode mode,
               const Tolerance<Real> &tol = {}) {
  if (a.rows() != js.n() || a.cols() != js.n())
    throw ShapeError("is_member: A must be " + std::to_string(js.n()) + "x" + std::to_string(js.n()));
  if (!all_finite(a) || !is_normal(a, tol))
    return false;
  const CMatrix<Real> aj = a * js.j();
  switch (mode) {
  case StructureMode::Hamiltonian:
    return is_hermitian(aj, tol);
  case StructureMode::SkewHamiltonian:
    return is_skew_hermitian(aj, tol);
  case StructureMode::Symplectic: {
    const CMatrix<Real> id = CMatrix<Real>::Identity(js.n(), js.n());
    return entrywise_close(a.adjoint() * js.j() * a, js.j(), tol.structure_atol) &&
           well_conditioned(id + a, Real(kCayleyCutoff));
  }
  }
  return false;
}

/// Diagonal of D; throws if D is not square diagonal at tolerance.
template <typename Real>
std::vector<std::complex<Real>> diagonal_entries(const CMatrix<Real> &d, const Tolerance<Real> &tol = {}) {
  require_square(d, "D");
  require_finite(d, "D");
  const CMatrix<Real> off = d - CMatrix<Real>(d.diagonal().asDiagonal());
  if (max_abs(off) > tol.structure_atol * (1 + max_abs(d)))
    throw PreconditionError("D is not diagonal");
  std::vector<std::complex<Real>> out(static_cast<std::size_t>(d.rows()));
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    out[static_cast<std::size_t>(i)] = d(i, i);
  return out;
}

namespace detail {

// True when the multiset {map(v)} equals the multiset {v}, pairing greedily.
template <typename Real, typename Map>
bool closed_under(const std::vector<std::complex<Real>> &values, Map map, Real atol) {
  std::vector<bool> used(values.size(), false);
  for (const auto &v : values) {
    const auto target = map(v);
    bool found = false;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!used[j] && std::abs(values[j] - target) <= atol * (1 + std::abs(target))) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found)
      return false;
  }
  return true;
}

} // namespace detail

/// Spectral symmetry the mode forces on eigenvalues:
///   Hamiltonian      lambda -> -conj(lambda)
///   SkewHamiltonian  lambda -> conj(lambda)
///   Symplectic       lambda -> conj(lambda), 1/lambda, 1/conj(lambda); no -1
template <typename Real>
bool check_spectrum_symmetry(const CMatrix<Real> &d, StructureMode mode, const Tolerance<Real> &tol = {}) {
  const auto values = diagonal_entries(d, tol);
  const Real atol = tol.structure_atol;
  using C = std::complex<Real>;
  switch (mode) {
  case StructureMode::Hamiltonian:
    return detail::closed_under<Real>(values, [](C z) { return -std::conj(z); }, atol);
  case StructureMode::SkewHamiltonian:
    return detail::closed_under<Real>(values, [](C z) { return std::conj(z); }, atol);
  case StructureMode::Symplectic:
    for (const auto &z : values)
      if (std::abs(z) <= atol || std::abs(z + Real(1)) <= atol)
        return false;
    return detail::closed_under<Real>(values, [](C z) { return std::conj(z); }, atol) &&
           detail::closed_under<Real>(values, [](C z) { return Real(1) / z; }, atol) &&
           detail::closed_under<Real>(values, [](C z) { return Real(1) / std::conj(z); }, atol);
  }
  return false;
}

} // namespace jproc
