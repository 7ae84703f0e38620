#include <doctest.h>

#include "jproc/jspace.hpp"
#include "jproc/symplectic.hpp"
#include "support/worked_examples.hpp"
#include "support/random.hpp"

using namespace jproc;
using namespace jproc::testdata;
using jproc::testing::Rng;

namespace {

void check_diagonalizes(const JStructure<double> &js) {
  const ComplexMatrix &u = js.u();
  const auto k = js.k();
  ComplexMatrix canon = ComplexMatrix::Zero(2 * k, 2 * k);
  canon.topLeftCorner(k, k) = I * ComplexMatrix::Identity(k, k);
  canon.bottomRightCorner(k, k) = -I * ComplexMatrix::Identity(k, k);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(2 * k, 2 * k)).norm() < 1e-12);
  CHECK((u * canon * u.adjoint() - js.j()).norm() < 1e-12);
}

} // namespace

TEST_CASE("JStructure: builds a diagonalizer for valid J") {
  SUBCASE("2x2 rotation") {
    const auto js = JStructure<double>::build(mat({{0, 1}, {-1, 0}}));
    CHECK(js.n() == 2);
    CHECK(js.k() == 1);
    check_diagonalizes(js);
  }
  SUBCASE("already diagonal") { check_diagonalizes(JStructure<double>::build(diag({I, -I}))); }
  SUBCASE("the 4x4 example J") {
    const auto js = JStructure<double>::build(j4());
    CHECK(js.k() == 2);
    check_diagonalizes(js);
  }
  SUBCASE("random real skew orthogonal J") {
    Rng rng(3);
    for (Eigen::Index k = 1; k <= 4; ++k)
      check_diagonalizes(build_jstructure(testing::random_j(rng, k)));
  }
  SUBCASE("deterministic") {
    const auto a = JStructure<double>::build(j4());
    const auto b = JStructure<double>::build(j4());
    CHECK(a.u() == b.u());
  }
}

TEST_CASE("JStructure: caller-supplied U") {
  const auto js = JStructure<double>::with_unitary(j4(), u_example1());
  CHECK(js.u() == u_example1());
  CHECK_NOTHROW(JStructure<double>::with_unitary(j4(), u_symplectic()));
  // swapping the eigenspaces breaks the canonical ordering
  ComplexMatrix swapped = u_example1();
  swapped.leftCols(2).swap(swapped.rightCols(2));
  CHECK_THROWS_AS(JStructure<double>::with_unitary(j4(), swapped), StructureError);
  CHECK_THROWS_AS(JStructure<double>::with_unitary(j4(), ComplexMatrix(2.0 * u_example1())), StructureError);
}

TEST_CASE("JStructure: invalid J") {
  CHECK_THROWS_AS(JStructure<double>::build(ComplexMatrix::Identity(2, 2)), StructureError);
  CHECK_THROWS_WITH_AS(JStructure<double>::build(ComplexMatrix::Identity(2, 2)), doctest::Contains("J^2 = -I"),
                       StructureError);
  CHECK_THROWS_AS(JStructure<double>::build(ComplexMatrix::Identity(3, 3)), ShapeError);
  CHECK_THROWS_AS(JStructure<double>::build(ComplexMatrix::Identity(2, 3)), ShapeError);
  CHECK_THROWS_AS(JStructure<double>::build(ComplexMatrix(0, 0)), ShapeError);
  // J^2 = -I but both eigenvalues equal i
  CHECK_THROWS_AS(JStructure<double>::build(diag({I, I})), StructureError);
  // J^2 = -I but not normal
  CHECK_THROWS_AS(JStructure<double>::build(mat({{I, 1}, {0, -I}})), StructureError);
  ComplexMatrix nan = j4();
  nan(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(JStructure<double>::build(nan), NumericalError);
}

TEST_CASE("partition and target tiles of the first worked example") {
  const auto js = JStructure<double>::with_unitary(j4(), u_example1());
  const auto [x1, x2] = partition_x(js, x_example1());
  CHECK(entrywise_close(x1, mat({{{1, 1}, {1, -1}, 0}, {0, 0, 0}}), 1e-14));
  CHECK(entrywise_close(x2, mat({{{1, -1}, {1, 1}, 0}, {0, 0, 1}}), 1e-14));
  const auto [x1a, x2a] = partition_x(js, x_example1(I * 2.0));
  CHECK(entrywise_close(x2a.col(2), mat({{0}, {2.0 * I}}), 1e-14));

  const auto tiles = block_target(js, at_example1());
  CHECK(entrywise_close(tiles.a11, mat({{-2.0 * I, -2.0 * I * kSqrt3}, {-2.0 * I * kSqrt3, 2.0 * I}}), 1e-14));
  CHECK(entrywise_close(tiles.a22, mat({{7.0 * I, I * kSqrt3}, {I * kSqrt3, 5.0 * I}}), 1e-14));
  CHECK(tiles.a12.norm() < 1e-14);
  CHECK(tiles.a21.norm() < 1e-14);
}

TEST_CASE("projectors of the first worked example") {
  const auto js = JStructure<double>::with_unitary(j4(), u_example1());
  const auto bd = make_block_data(js, x_example1(), at_example1());
  CHECK(bd.k() == 2);
  CHECK(bd.m() == 3);
  CHECK(entrywise_close(bd.p, mat({{1, I, 0}, {-I, 1, 0}, {0, 0, 2}}) / 2.0, 1e-14));
  CHECK(entrywise_close(bd.t, mat({{1, -I, 0}, {I, 1, 0}, {0, 0, 0}}) / 2.0, 1e-14));
  CHECK(entrywise_close(bd.l, mat({{1, -I, 0}, {I, 1, 0}, {0, 0, 0}}) / 2.0, 1e-14));
  CHECK(bd.q.norm() < 1e-14);
  CHECK(entrywise_close(bd.r, diag({0, 1}), 1e-14));
  CHECK(bd.s.norm() < 1e-14);
  for (const auto *proj : {&bd.p, &bd.t, &bd.l, &bd.q, &bd.r, &bd.s})
    CHECK(is_orthogonal_projector(*proj));
}

TEST_CASE("partition: rank-deficient X") {
  const auto js = JStructure<double>::build(j4());
  CHECK_THROWS_WITH_AS(partition_x(js, x_symplectic()), "X not full column rank", PreconditionError);
  CHECK_NOTHROW(partition_x(js, x_symplectic(), {}, true));
  CHECK_THROWS_AS(partition_x(js, ComplexMatrix(ComplexMatrix::Ones(3, 2))), ShapeError);
}

TEST_CASE("assemble inverts the block view") {
  Rng rng(8);
  const auto js = build_jstructure(testing::random_j(rng, 3));
  const ComplexMatrix a = testing::random_matrix(rng, 6, 6);
  const auto t = block_target(js, a);
  CHECK((assemble<double>(js.u(), t.a11, t.a12, t.a21, t.a22) - a).norm() < 1e-12);
}

TEST_CASE("is_member: introductory examples") {
  SUBCASE("normal J-Hamiltonian") {
    const auto js = JStructure<double>::build(diag({I, -I}));
    const ComplexMatrix a = mat({{2.0 * I, I}, {-I, 2.0 * I}});
    CHECK(is_member(a, js, StructureMode::Hamiltonian));
    CHECK_FALSE(is_member(a, js, StructureMode::SkewHamiltonian));
    // spectrum {1 + 2i, -1 + 2i}: closed under -conj, not under conj
    CHECK(check_spectrum_symmetry(diag({{1, 2}, {-1, 2}}), StructureMode::Hamiltonian));
    CHECK_FALSE(check_spectrum_symmetry(diag({{1, 2}, {-1, 2}}), StructureMode::SkewHamiltonian));
  }
  SUBCASE("normal skew J-Hamiltonian") {
    const auto js = JStructure<double>::build(mat({{0, 1}, {-1, 0}}));
    const ComplexMatrix a = mat({{1.5, 0.5 * I}, {-0.5 * I, 1.5}});
    CHECK(is_member(a, js, StructureMode::SkewHamiltonian));
    CHECK_FALSE(is_member(a, js, StructureMode::Hamiltonian));
    CHECK(check_spectrum_symmetry(diag({1, 2}), StructureMode::SkewHamiltonian));
    CHECK_FALSE(check_spectrum_symmetry(diag({1, 2}), StructureMode::Hamiltonian));
  }
  SUBCASE("non-normal matrix is never a member") {
    const auto js = JStructure<double>::build(diag({I, -I}));
    CHECK_FALSE(is_member(mat({{I, 1}, {0, I}}), js, StructureMode::Hamiltonian));
  }
  SUBCASE("wrong size") {
    const auto js = JStructure<double>::build(diag({I, -I}));
    CHECK_THROWS_AS(is_member(ComplexMatrix(ComplexMatrix::Identity(3, 3)), js, StructureMode::Hamiltonian), ShapeError);
  }
}

TEST_CASE("is_member: symplectic") {
  const auto js = JStructure<double>::build(j4());
  CHECK(is_member(ahat_symplectic(), js, StructureMode::Symplectic));
  CHECK(is_member(ComplexMatrix(ComplexMatrix::Identity(4, 4)), js, StructureMode::Symplectic));
  // J itself is symplectic and normal, but has no -1 eigenvalue issue
  CHECK(is_member(j4(), js, StructureMode::Symplectic));
  // -I is symplectic but I + A is singular
  CHECK_FALSE(is_member(ComplexMatrix(-ComplexMatrix::Identity(4, 4)), js, StructureMode::Symplectic));
  CHECK_FALSE(is_member(ComplexMatrix(2.0 * ComplexMatrix::Identity(4, 4)), js, StructureMode::Symplectic));
}

TEST_CASE("is_member: random members in each mode") {
  Rng rng(19);
  for (int i = 0; i < 20; ++i) {
    const auto js = build_jstructure(testing::random_j(rng, 1 + i % 4));
    const ComplexMatrix h = testing::random_ham_member(rng, js);
    CHECK(is_member(h, js, StructureMode::Hamiltonian));
    CHECK(is_member(ComplexMatrix(I * h), js, StructureMode::SkewHamiltonian));
    CHECK(is_member(cayley(h), js, StructureMode::Symplectic));
    CHECK_FALSE(is_member(ComplexMatrix(h + ComplexMatrix::Identity(js.n(), js.n())), js,
                          StructureMode::Hamiltonian));
  }
}

TEST_CASE("diagonal D") {
  const auto values = diagonal_entries(d_example1());
  REQUIRE(values.size() == 3);
  CHECK(values[0] == Complex(1, 1));
  CHECK(values[2] == I);
  CHECK_THROWS_WITH_AS(diagonal_entries(mat({{1, 1}, {0, 1}})), doctest::Contains("D is not diagonal"),
                       PreconditionError);
  CHECK_THROWS_AS(diagonal_entries(ComplexMatrix(ComplexMatrix::Ones(2, 3))), ShapeError);
}

TEST_CASE("spectrum symmetry of the worked examples") {
  CHECK(check_spectrum_symmetry(d_example1(), StructureMode::Hamiltonian));
  CHECK(check_spectrum_symmetry(d_example3(), StructureMode::SkewHamiltonian));
  CHECK(check_spectrum_symmetry(d_symplectic(), StructureMode::Symplectic));
  CHECK_FALSE(check_spectrum_symmetry(diag({-1}), StructureMode::Symplectic));
  CHECK_FALSE(check_spectrum_symmetry(diag({0}), StructureMode::Symplectic));
  CHECK_FALSE(check_spectrum_symmetry(diag({2}), StructureMode::Symplectic));
  CHECK(check_spectrum_symmetry(diag({2, 0.5}), StructureMode::Symplectic));
}
