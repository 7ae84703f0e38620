#pragma once

// Normal J-Hamiltonian Procrustes problem: feasibility conditions, the
// optimal blocks and the full solve, plus the parameterized general
// solution of AX = XD used by the sampling oracle.

#include <array>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "jproc/core.hpp"
#include "jproc/jspace.hpp"
#include "jproc/matcore.hpp"

namespace jproc {

enum class Condition : std::size_t {
  SkewAt11 = 0,
  SkewAt22,
  SkewGram,
  Coupling,
  Cond1,
  Cond22,
  Cond33,
  Commute,
};

inline constexpr std::size_t kConditionCount = 8;

inline constexpr std::array<Condition, kConditionCount> kAllConditions = {
    Condition::SkewAt11, Condition::SkewAt22, Condition::SkewGram, Condition::Coupling,
    Condition::Cond1,    Condition::Cond22,   Condition::Cond33,   Condition::Commute};

/// Report key of a condition.
constexpr std::string_view condition_name(Condition c) {
  constexpr std::array<std::string_view, kConditionCount> names = {
      "c_skew_At11", "c_skew_At22", "c_skew_gram", "c_coupling",
      "c_cond1",     "c_cond22",    "c_cond33",    "c_commute"};
  return names[static_cast<std::size_t>(c)];
}

/// Solver step that tests the condition.
constexpr int condition_step(Condition c) {
  constexpr std::array<int, kConditionCount> steps = {7, 7, 8, 9, 9, 10, 10, 15};
  return steps[static_cast<std::size_t>(c)];
}

template <typename Real = double>
struct ConditionResult {
  Real residual = 0;
  Real threshold = 0;
  bool evaluated = false;

  bool passed() const { return evaluated && residual <= threshold; }
};

namespace detail {

// Residual norm against atol * (1 + sum of the norms of its terms).
template <typename Real>
ConditionResult<Real> measure(const CMatrix<Real> &residual, Real term_norms, Real atol) {
  return {residual.norm(), atol * (1 + term_norms), true};
}

template <typename Real>
Real norm_sum(std::initializer_list<Real> norms) {
  Real total = 0;
  for (Real v : norms)
    total += v;
  return total;
}

} // namespace detail

/// Residuals of every feasibility condition.
///
/// With hermitian_flavor the structure tests on At11, At22 and the Gram
/// matrix X1^* X1 D - X2^* X2 D check hermitian instead of skew-hermitian,
/// the coupling uses At12 + At21^*, and N carries the skew-case signs.
template <typename Real = double>
struct FeasibilityReport {
  std::array<ConditionResult<Real>, kConditionCount> entries{};
  bool hermitian_flavor = false;

  const ConditionResult<Real> &operator[](Condition c) const {
    return entries[static_cast<std::size_t>(c)];
  }
  ConditionResult<Real> &operator[](Condition c) { return entries[static_cast<std::size_t>(c)]; }

  /// First failing step in solver order; conditions not yet evaluated
  /// are ignored.
  std::optional<int> failed_step() const {
    for (Condition c : kAllConditions) {
      const auto &e = (*this)[c];
      if (e.evaluated && !e.passed())
        return condition_step(c);
    }
    return std::nullopt;
  }

  bool feasible() const {
    for (const auto &e : entries)
      if (!e.passed())
        return false;
    return true;
  }
};

template <typename Real = double>
struct Intermediates {
  CMatrix<Real> m, n;
  Real m_terms = 0; // sum of the norms of the terms of M
  Real n_terms = 0;
};

/// M and N (step 6):
///   M = X1 D - X1 D P (X2 P)^+ X2 - At12 Q X2
///   N = X2 D -/+ (P X2^*)^+ P D^* X1^* X1 - Q At21 X1
/// (the sign is + with hermitian_flavor).
template <typename Real>
Intermediates<Real> intermediates(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                  bool hermitian_flavor = false) {
  if (d.rows() != bd.m() || d.cols() != bd.m())
    throw ShapeError("D: expected " + std::to_string(bd.m()) + "x" + std::to_string(bd.m()));
  const CMatrix<Real> x1d = bd.x1 * d;
  const CMatrix<Real> m_t1 = x1d * bd.p * bd.x2p_pinv * bd.x2;
  const CMatrix<Real> m_t2 = bd.at12 * bd.q * bd.x2;
  const CMatrix<Real> x2d = bd.x2 * d;
  const CMatrix<Real> n_t1 = bd.x2p_pinv.adjoint() * bd.p * d.adjoint() * bd.x1.adjoint() * bd.x1;
  const CMatrix<Real> n_t2 = bd.q * bd.at21 * bd.x1;
  Intermediates<Real> out;
  out.m = x1d - m_t1 - m_t2;
  out.n = hermitian_flavor ? CMatrix<Real>(x2d + n_t1 - n_t2) : CMatrix<Real>(x2d - n_t1 - n_t2);
  out.m_terms = detail::norm_sum<Real>({x1d.norm(), m_t1.norm(), m_t2.norm()});
  out.n_terms = detail::norm_sum<Real>({x2d.norm(), n_t1.norm(), n_t2.norm()});
  return out;
}

/// Steps 7-10. Every condition is evaluated, including those
/// after the first failure; c_commute is left for compute_blocks.
template <typename Real>
FeasibilityReport<Real> check_feasibility(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                          bool hermitian_flavor = false,
                                          const Tolerance<Real> &tol = {}) {
  const Real atol = tol.structure_atol;
  const Real sign = hermitian_flavor ? Real(-1) : Real(1);
  FeasibilityReport<Real> rep;
  rep.hermitian_flavor = hermitian_flavor;

  rep[Condition::SkewAt11] =
      detail::measure<Real>(bd.at11 + sign * bd.at11.adjoint(), 2 * bd.at11.norm(), atol);
  rep[Condition::SkewAt22] =
      detail::measure<Real>(bd.at22 + sign * bd.at22.adjoint(), 2 * bd.at22.norm(), atol);

  const CMatrix<Real> g1 = bd.x1.adjoint() * bd.x1 * d;
  const CMatrix<Real> g2 = bd.x2.adjoint() * bd.x2 * d;
  const CMatrix<Real> gram = g1 - g2;
  rep[Condition::SkewGram] =
      detail::measure<Real>(gram + sign * gram.adjoint(), 2 * (g1.norm() + g2.norm()), atol);

  const CMatrix<Real> c12 = bd.at12 * bd.q;
  const CMatrix<Real> c21 = bd.at21.adjoint() * bd.q;
  rep[Condition::Coupling] = detail::measure<Real>(c12 - sign * c21, c12.norm() + c21.norm(), atol);

  const CMatrix<Real> x1dp = bd.x1 * d * bd.p;
  rep[Condition::Cond1] = detail::measure<Real>(x1dp * bd.l, x1dp.norm(), atol);

  const auto mid = intermediates(bd, d, hermitian_flavor);
  rep[Condition::Cond22] = detail::measure<Real>(mid.m * bd.p, mid.m_terms, atol);
  rep[Condition::Cond33] = detail::measure<Real>(mid.n * bd.t, mid.n_terms, atol);
  return rep;
}

template <typename Real = double>
struct HamBlocks {
  CMatrix<Real> a11, a12, a22;
};

/// Optimal blocks, Steps 11-14:
///   A12 = X1 D P (X2 P)^+ + At12 Q
///   A11 = M X1^+ + (X1^+)^* X2^* Q At21 R + R At11 R
///   A22 = N X2^+ + (X2^+)^* [X1^* X1 D P (X2 P)^+ - X1^* At12 Q] S + S At22 S
template <typename Real>
HamBlocks<Real> compute_blocks(const BlockData<Real> &bd, const CMatrix<Real> &d) {
  const auto mid = intermediates(bd, d);
  const CMatrix<Real> x1dp_x2pp = bd.x1 * d * bd.p * bd.x2p_pinv;
  HamBlocks<Real> out;
  out.a12 = x1dp_x2pp + bd.at12 * bd.q;
  out.a11 = mid.m * bd.x1_pinv + bd.x1_pinv.adjoint() * bd.x2.adjoint() * bd.q * bd.at21 * bd.r +
            bd.r * bd.at11 * bd.r;
  out.a22 = mid.n * bd.x2_pinv +
            bd.x2_pinv.adjoint() *
                (bd.x1.adjoint() * x1dp_x2pp - bd.x1.adjoint() * bd.at12 * bd.q) * bd.s +
            bd.s * bd.at22 * bd.s;
  return out;
}

/// A11 A12 - A12 A22, thresholded against the norms of both products.
template <typename Real>
ConditionResult<Real> commutation(const CMatrix<Real> &a11, const CMatrix<Real> &a12,
                                  const CMatrix<Real> &a22, const Tolerance<Real> &tol) {
  const CMatrix<Real> left = a11 * a12;
  const CMatrix<Real> right = a12 * a22;
  return detail::measure<Real>(left - right, left.norm() + right.norm(), tol.structure_atol);
}

template <typename Real = double>
struct SolveOptions {
  bool allow_rank_deficient_x = false;
};

template <typename Real = double>
struct Solution {
  CMatrix<Real> a_hat;
  /// The Hamiltonian-stage output before the mode's back-transformation (equal to
  /// a_hat for the Hamiltonian mode).
  CMatrix<Real> b_hat;
  Real residual = 0;       ///< ||At - a_hat||_F
  Real eigen_residual = 0; ///< ||a_hat X - X D||_F
  FeasibilityReport<Real> report;
};

template <typename Real = double>
struct Infeasible {
  FeasibilityReport<Real> report;
  int failed_step = 18;
};

template <typename Real = double>
using SolveOutcome = std::variant<Solution<Real>, Infeasible<Real>>;

template <typename Real>
bool is_solution(const SolveOutcome<Real> &o) {
  return std::holds_alternative<Solution<Real>>(o);
}

template <typename Real>
const FeasibilityReport<Real> &report_of(const SolveOutcome<Real> &o) {
  return std::visit([](const auto &v) -> const FeasibilityReport<Real> & { return v.report; }, o);
}

namespace detail {

template <typename Real>
void validate_problem(const JStructure<Real> &js, const CMatrix<Real> &x, const CMatrix<Real> &d,
                      const CMatrix<Real> &at, const Tolerance<Real> &tol) {
  tol.validate();
  if (x.rows() != js.n())
    throw ShapeError("X: expected " + std::to_string(js.n()) + " rows");
  if (d.rows() != x.cols() || d.cols() != x.cols())
    throw ShapeError("D: expected " + std::to_string(x.cols()) + "x" + std::to_string(x.cols()));
  if (at.rows() != js.n() || at.cols() != js.n())
    throw ShapeError("A_tilde: expected " + std::to_string(js.n()) + "x" + std::to_string(js.n()));
  diagonal_entries(d, tol);
  require_finite(at, "A_tilde");
}

} // namespace detail

namespace ham {

/// Full solve. Infeasible carries the step whose test failed first.
template <typename Real>
SolveOutcome<Real> solve(const JStructure<Real> &js, const CMatrix<Real> &x, const CMatrix<Real> &d,
                         const CMatrix<Real> &at, const Tolerance<Real> &tol = {},
                         const SolveOptions<Real> &opts = {}) {
  detail::validate_problem(js, x, d, at, tol);
  const auto bd = make_block_data(js, x, at, tol, opts.allow_rank_deficient_x);
  auto report = check_feasibility(bd, d, false, tol);
  const auto blocks = compute_blocks(bd, d);
  report[Condition::Commute] = commutation(blocks.a11, blocks.a12, blocks.a22, tol);
  if (const auto step = report.failed_step())
    return Infeasible<Real>{report, *step};

  Solution<Real> sol;
  sol.a_hat = assemble<Real>(bd.u, blocks.a11, blocks.a12, blocks.a12.adjoint(), blocks.a22);
  sol.b_hat = sol.a_hat;
  sol.residual = (at - sol.a_hat).norm();
  sol.eigen_residual = (sol.a_hat * x - x * d).norm();
  sol.report = std::move(report);
  return sol;
}

} // namespace ham

/// Names the first condition a general-solution construction violated.
template <typename Real = double>
struct ConditionViolation {
  std::string condition;
  Real residual = 0;
};

template <typename Real = double>
using GeneralResult = std::variant<CMatrix<Real>, ConditionViolation<Real>>;

namespace detail {

template <typename Real>
void require_free_blocks(const BlockData<Real> &bd, const CMatrix<Real> &y11, const CMatrix<Real> &y12,
                         const CMatrix<Real> &y22, bool hermitian, const Tolerance<Real> &tol) {
  const auto k = bd.k();
  for (const CMatrix<Real> *y : {&y11, &y12, &y22})
    if (y->rows() != k || y->cols() != k)
      throw ShapeError("free blocks must be " + std::to_string(k) + "x" + std::to_string(k));
  const char *kind = hermitian ? "hermitian" : "skew-hermitian";
  for (const CMatrix<Real> *y : {&y11, &y22}) {
    const bool ok = hermitian ? is_hermitian(*y, tol) : is_skew_hermitian(*y, tol);
    if (!ok)
      throw PreconditionError(std::string("Y11 and Y22 must be ") + kind);
  }
}

// First violated entry of an ordered list of (name, residual, threshold).
template <typename Real>
struct NamedCheck {
  const char *name;
  ConditionResult<Real> result;
};

template <typename Real>
std::optional<ConditionViolation<Real>> first_violation(std::initializer_list<NamedCheck<Real>> checks) {
  for (const auto &c : checks)
    if (!c.result.passed())
      return ConditionViolation<Real>{c.name, c.result.residual};
  return std::nullopt;
}

} // namespace detail

template <typename Real = double>
struct GeneralBlocks {
  CMatrix<Real> a11, a12, a22;
  std::optional<ConditionViolation<Real>> violation;
};

namespace ham {

/// Blocks of the general normal J-Hamiltonian solution of AX = XD for the
/// free parameters Y11, Y22 (skew-hermitian) and Y12, with the conditions
/// under which they define a solution.
template <typename Real>
GeneralBlocks<Real> general_blocks(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                   const CMatrix<Real> &y11, const CMatrix<Real> &y12,
                                   const CMatrix<Real> &y22, const Tolerance<Real> &tol = {}) {
  detail::require_free_blocks(bd, y11, y12, y22, false, tol);
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
  const CMatrix<Real> bottom = x2d - s1 - s2;

  GeneralBlocks<Real> out;
  out.a12 = base12 + y12q;
  out.a11 = top * bd.x1_pinv + bd.x1_pinv.adjoint() * x2h * y12q.adjoint() * bd.r + bd.r * y11 * bd.r;
  out.a22 = bottom * bd.x2_pinv + bd.x2_pinv.adjoint() * (x1h * bd.x1 * d * bd.p * bd.x2p_pinv - x1h * y12q) * bd.s +
            bd.s * y22 * bd.s;

  const CMatrix<Real> e1 = x1h * (x1d - out.a12 * bd.x2);
  const CMatrix<Real> e2 = x2h * (x2d - out.a12.adjoint() * bd.x1);
  const Real e_terms = 2 * (x1h.norm() * (x1d.norm() + out.a12.norm() * bd.x2.norm()) +
                            x2h.norm() * (x2d.norm() + out.a12.norm() * bd.x1.norm()));
  CMatrix<Real> skew_res(e1.rows(), e1.cols() * 2);
  skew_res << e1 + e1.adjoint(), e2 + e2.adjoint();

  out.violation = detail::first_violation<Real>({
      {"cond1", detail::measure<Real>(x1d * bd.p * bd.l, x1d.norm(), atol)},
      {"cond2", detail::measure<Real>(top * bd.p, x1d.norm() + t1.norm() + t2.norm(), atol)},
      {"cond3", detail::measure<Real>(bottom * bd.t, x2d.norm() + s1.norm() + s2.norm(), atol)},
      {"skew", detail::measure<Real>(skew_res, e_terms, atol)},
      {"commute", commutation(out.a11, out.a12, out.a22, tol)},
  });
  return out;
}

/// The assembled member of S intersect NJH, or the first violated condition.
template <typename Real>
GeneralResult<Real> general_solution(const BlockData<Real> &bd, const CMatrix<Real> &d,
                                     const CMatrix<Real> &y11, const CMatrix<Real> &y12,
                                     const CMatrix<Real> &y22, const Tolerance<Real> &tol = {}) {
  auto blocks = general_blocks(bd, d, y11, y12, y22, tol);
  if (blocks.violation)
    return *blocks.violation;
  return assemble<Real>(bd.u, blocks.a11, blocks.a12, blocks.a12.adjoint(), blocks.a22);
}

} // namespace ham
} // namespace jproc
