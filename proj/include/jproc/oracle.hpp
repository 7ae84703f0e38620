#pragma once

// Brute-force optimality oracle: draw members of S intersect T from the
// general-solution parameterization, keep those that verify, and compare
// their distance to the target against the solver's answer.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "jproc/problem.hpp"

namespace jproc {

class SamplingError : public Error {
public:
  using Error::Error;
};

template <typename Real = double>
struct SampleBatch {
  StructureMode mode = StructureMode::Hamiltonian;
  std::vector<CMatrix<Real>> samples;
  std::vector<std::uint64_t> seeds; ///< per-sample attempt seed
  std::size_t attempts = 0;
};

template <typename Real = double>
struct SamplerOptions {
  std::size_t budget_factor = 100; ///< attempts allowed per requested sample
  std::optional<Real> scale;       ///< Gaussian scale; default ||At||_F / n
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

template <typename Real>
CMatrix<Real> gaussian(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<Real> dist(0, 1);
  CMatrix<Real> g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Real re = dist(rng);
      const Real im = dist(rng);
      g(i, j) = {re, im};
    }
  return g;
}

template <typename Real>
CMatrix<Real> hermitian_part(const CMatrix<Real> &g) {
  return (g + g.adjoint()) / Real(2);
}

template <typename Real>
CMatrix<Real> skew_part(const CMatrix<Real> &g) {
  return (g - g.adjoint()) / Real(2);
}

template <typename Real>
bool eigen_residual_ok(const CMatrix<Real> &a, const CMatrix<Real> &x, const CMatrix<Real> &d,
                       const Tolerance<Real> &tol) {
  const Real scale = 1 + a.norm() * x.norm() + x.norm() * d.norm();
  return (a * x - x * d).norm() <= tol.structure_atol * scale;
}

} // namespace detail

/// One attempt of the sampler: a pure function of (instance, seed, index).
/// Returns the candidate only if it verifies as a member of S intersect T.
template <typename Real>
std::optional<CMatrix<Real>> sample_attempt(const ProblemInstance<Real> &inst, const JStructure<Real> &js,
                                            const BlockData<Real> &bd, Real scale, std::uint64_t attempt_seed,
                                            bool perturb) {
  const bool hermitian = inst.mode == StructureMode::SkewHamiltonian;
  const auto free_part = [&](const CMatrix<Real> &g) {
    return hermitian ? detail::hermitian_part(g) : detail::skew_part(g);
  };
  // The unperturbed parameters reproduce the Procrustes optimum.
  CMatrix<Real> y11 = free_part(bd.at11);
  CMatrix<Real> y22 = free_part(bd.at22);
  CMatrix<Real> y12 = bd.at12;
  if (perturb) {
    std::mt19937_64 rng(attempt_seed);
    std::bernoulli_distribution coin(0.5);
    const auto k = bd.k();
    const bool p11 = coin(rng), p22 = coin(rng), p12 = coin(rng);
    const CMatrix<Real> g11 = detail::gaussian<Real>(rng, k, k);
    const CMatrix<Real> g22 = detail::gaussian<Real>(rng, k, k);
    const CMatrix<Real> w = detail::gaussian<Real>(rng, k, k);
    if (p11)
      y11 += scale * free_part(g11);
    if (p22)
      y22 += scale * free_part(g22);
    // W (X2 P)(X2 P)^+ = W (I - Q) leaves Y12 Q unchanged
    if (p12)
      y12 += scale * w * (bd.x2p * bd.x2p_pinv);
  }
  GeneralResult<Real> result;
  switch (inst.mode) {
  case StructureMode::Hamiltonian:
    result = ham::general_solution(bd, inst.d, y11, y12, y22, inst.tol);
    break;
  case StructureMode::SkewHamiltonian:
    result = skewham::general_solution(bd, inst.d, y11, y12, y22, inst.tol);
    break;
  case StructureMode::Symplectic:
    try {
      result = symplectic::general_solution(bd, inst.d, y11, y12, y22, inst.tol);
    } catch (const SingularityError &) {
      return std::nullopt;
    }
    break;
  }
  auto *a = std::get_if<CMatrix<Real>>(&result);
  if (a == nullptr)
    return std::nullopt;
  if (!is_member(*a, js, inst.mode, inst.tol) || !detail::eigen_residual_ok(*a, inst.x, inst.d, inst.tol))
    return std::nullopt;
  return std::move(*a);
}

/// Up to `count` verified members of S intersect T. Attempt 0 uses the
/// unperturbed parameters; the rest perturb Y11, Y22 and Y12 and are kept
/// only when they pass is_member and the AX = XD residual test.
template <typename Real>
SampleBatch<Real> sample_feasible(const ProblemInstance<Real> &inst, std::size_t count, std::uint64_t seed,
                                  const SamplerOptions<Real> &opts = {}) {
  inst.validate();
  const auto js = JStructure<Real>::build(inst.j, inst.tol);
  if (!is_solution(solve(js, inst)))
    throw SamplingError("sample_feasible: the instance is infeasible");
  const auto bd = make_block_data(js, inst.x, inst.a_tilde, inst.tol, inst.allow_rank_deficient_x);
  Real scale = opts.scale ? *opts.scale : inst.a_tilde.norm() / Real(inst.j.rows());
  if (!(scale > 0))
    scale = 1;

  SampleBatch<Real> batch;
  batch.mode = inst.mode;
  const std::size_t budget = std::max<std::size_t>(1, opts.budget_factor * count);
  for (std::size_t idx = 0; idx < budget && batch.samples.size() < count; ++idx) {
    const std::uint64_t attempt_seed = detail::splitmix64(seed ^ detail::splitmix64(idx));
    ++batch.attempts;
    if (auto a = sample_attempt(inst, js, bd, scale, attempt_seed, idx != 0)) {
      batch.samples.push_back(std::move(*a));
      batch.seeds.push_back(attempt_seed);
    }
  }
  if (batch.samples.empty())
    throw SamplingError("sample_feasible: attempt budget exhausted with no accepted sample");
  return batch;
}

template <typename Real = double>
struct AuditReport {
  std::size_t sample_count = 0;
  /// max over samples of ||At - A_hat|| - ||At - A||; <= 0 when A_hat wins.
  Real margin = -std::numeric_limits<Real>::infinity();
  std::size_t near_optimal = 0; ///< samples within 1e-8 of the optimum
  /// min ||A - A_hat|| over the near-optimal samples (uniqueness probe).
  std::optional<Real> min_near_distance;
  /// max ||A - A_hat|| over the near-optimal samples.
  std::optional<Real> max_near_distance;
};

template <typename Real>
AuditReport<Real> optimality_audit(const ProblemInstance<Real> &inst, const CMatrix<Real> &a_hat,
                                   const SampleBatch<Real> &batch, Real near_tol = Real(1e-8)) {
  AuditReport<Real> rep;
  rep.sample_count = batch.samples.size();
  const Real best = (inst.a_tilde - a_hat).norm();
  for (const auto &a : batch.samples) {
    const Real dist = (inst.a_tilde - a).norm();
    rep.margin = std::max(rep.margin, best - dist);
    if (dist <= best + near_tol) {
      const Real gap = (a - a_hat).norm();
      ++rep.near_optimal;
      rep.min_near_distance = rep.min_near_distance ? std::min(*rep.min_near_distance, gap) : gap;
      rep.max_near_distance = rep.max_near_distance ? std::max(*rep.max_near_distance, gap) : gap;
    }
  }
  return rep;
}

} // namespace jproc
