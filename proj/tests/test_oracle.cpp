#include <doctest.h>

#include "jproc/oracle.hpp"
#include "support/worked_examples.hpp"
#include "support/random.hpp"

using namespace jproc;
using namespace jproc::testdata;
using jproc::testing::Rng;

namespace {

ProblemInstance<double> instance(StructureMode mode, ComplexMatrix x, ComplexMatrix d, ComplexMatrix at,
                                 bool rank_deficient = false) {
  ProblemInstance<double> inst;
  inst.mode = mode;
  inst.j = j4();
  inst.x = std::move(x);
  inst.d = std::move(d);
  inst.a_tilde = std::move(at);
  inst.allow_rank_deficient_x = rank_deficient;
  return inst;
}

ProblemInstance<double> example1() {
  return instance(StructureMode::Hamiltonian, x_example1(), d_example1(), at_example1());
}

ComplexMatrix optimum(const ProblemInstance<double> &inst) {
  const auto out = solve(inst);
  REQUIRE(is_solution(out));
  return std::get<Solution<double>>(out).a_hat;
}

} // namespace

TEST_CASE("sampler: first sample is the optimum itself") {
  const auto inst = example1();
  const auto batch = sample_feasible(inst, 1, 5);
  REQUIRE(batch.samples.size() == 1);
  CHECK(entrywise_close(batch.samples[0], ahat_example1(), 1e-9));
  const auto audit = optimality_audit(inst, optimum(inst), batch);
  CHECK(std::abs(audit.margin) < 1e-12);
  CHECK(audit.near_optimal == 1);
}

TEST_CASE("sampler: deterministic for a fixed seed") {
  const auto inst = example1();
  const auto a = sample_feasible(inst, 20, 42);
  const auto b = sample_feasible(inst, 20, 42);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.seeds == b.seeds);
  CHECK(a.attempts == b.attempts);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);
  const auto c = sample_feasible(inst, 20, 43);
  CHECK(c.seeds != a.seeds);
}

TEST_CASE("sampler: every accepted sample is a verified member") {
  const auto inst = example1();
  const auto js = JStructure<double>::build(inst.j);
  const auto batch = sample_feasible(inst, 50, 1);
  CHECK(batch.samples.size() == 50);
  CHECK(batch.mode == StructureMode::Hamiltonian);
  for (const auto &a : batch.samples) {
    CHECK((a * inst.x - inst.x * inst.d).norm() < 1e-9);
    CHECK(is_normal(a));
    CHECK(is_member(a, js, StructureMode::Hamiltonian));
  }
}

TEST_CASE("sampler: Y12 perturbation keeps Y12 Q") {
  Rng rng(9);
  const auto js = build_jstructure(testing::random_j(rng, 3));
  const auto known = testing::random_ham_instance(rng, js, 2);
  const auto bd = make_block_data(js, known.x, known.a_tilde);
  const ComplexMatrix w = testing::random_matrix(rng, 3, 3);
  const ComplexMatrix y12 = bd.at12 + w * (bd.x2p * bd.x2p_pinv);
  CHECK(((y12 - bd.at12) * bd.q).norm() < 1e-12);
}

TEST_CASE("sampler: infeasible instance") {
  const auto inst = instance(StructureMode::Hamiltonian, x_example2(), d_example2(), at_example2());
  CHECK_THROWS_AS(sample_feasible(inst, 5, 1), SamplingError);
}

TEST_CASE("audit: the worked examples are optimal over sampled feasible sets") {
  SUBCASE("first example") {
    const auto inst = example1();
    const auto audit = optimality_audit(inst, optimum(inst), sample_feasible(inst, 200, 7));
    CHECK(audit.sample_count == 200);
    CHECK(audit.margin <= 1e-8);
  }
  SUBCASE("third example") {
    const auto inst = instance(StructureMode::SkewHamiltonian, x_example1(), d_example3(), at_example3(1.0));
    const auto audit = optimality_audit(inst, optimum(inst), sample_feasible(inst, 200, 7));
    CHECK(audit.sample_count == 200);
    CHECK(audit.margin <= 1e-8);
  }
  SUBCASE("symplectic example") {
    const auto inst =
        instance(StructureMode::Symplectic, x_symplectic(), d_symplectic(), at_symplectic(), true);
    const auto audit = optimality_audit(inst, optimum(inst), sample_feasible(inst, 200, 7));
    CHECK(audit.sample_count == 200);
    CHECK(audit.margin <= 1e-8);
  }
}

TEST_CASE("audit: random instances, and near-optimal samples coincide with the optimum") {
  Rng rng(77);
  for (int t = 0; t < 6; ++t) {
    const auto js = build_jstructure(testing::random_j(rng, 2));
    auto known = testing::random_ham_instance(rng, js, 2);
    ProblemInstance<double> inst;
    inst.mode = StructureMode::Hamiltonian;
    inst.j = js.j();
    inst.x = known.x;
    inst.d = known.d;
    inst.a_tilde = known.a_tilde;
    if (t % 2 == 1) {
      const auto skew = testing::to_skew(known);
      inst.mode = StructureMode::SkewHamiltonian;
      inst.d = skew.d;
      inst.a_tilde = skew.a_tilde;
    }
    const ComplexMatrix a_hat = optimum(inst);
    const auto audit = optimality_audit(inst, a_hat, sample_feasible(inst, 50, 100 + t));
    CHECK(audit.margin <= 1e-8);
    REQUIRE(audit.max_near_distance);
    CHECK(*audit.max_near_distance < 1e-3);
  }
}

TEST_CASE("audit: a better candidate shows a positive margin") {
  const auto inst = example1();
  SampleBatch<double> batch;
  batch.samples.push_back(inst.a_tilde);
  const auto audit = optimality_audit(inst, ahat_example1(), batch);
  CHECK(audit.margin > 1.0);
  CHECK(audit.near_optimal == 1);
}
