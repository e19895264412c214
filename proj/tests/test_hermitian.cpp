#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lrmf/hermitian.hpp"
#include "lrmf/rng.hpp"
#include "lrmf/sampling.hpp"
#include "oracles.hpp"

using namespace lrmf;

namespace {

Hermitian random_hermitian(Rng& rng, int m) {
  CMatrix raw(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      raw(i, j) = Complex(rng.symmetric(1.0), rng.symmetric(1.0));
  return Hermitian(0.5 * (raw + raw.adjoint().eval()));
}

Hermitian random_real_symmetric_2x2(Rng& rng) {
  CMatrix raw = CMatrix::Zero(2, 2);
  raw(0, 0) = rng.symmetric(2.0);
  raw(1, 1) = rng.symmetric(2.0);
  raw(0, 1) = raw(1, 0) = rng.symmetric(2.0);
  return Hermitian(raw);
}

}  // namespace

TEST_CASE("inner product on basis elements") {
  for (int m : {1, 2, 4}) {
    const Hermitian e11 = basis_element(BasisIndex::diagonal(1), m);
    CHECK(frobenius_inner(e11, e11) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Hermitian e11 = basis_element(BasisIndex::diagonal(1), 2);
  const Hermitian e22 = basis_element(BasisIndex::diagonal(2), 2);
  CHECK(frobenius_inner(e11, e22) == doctest::Approx(0.0).epsilon(1e-14));

  CMatrix s(2, 2);
  s << Complex(0, 0), Complex(1, 2), Complex(1, -2), Complex(0, 0);
  const Hermitian sh(s);
  const Hermitian esym = basis_element(BasisIndex::real_sym(1, 2), 2);
  CHECK(frobenius_inner(sh, esym) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("inner product rejects dimension mismatch") {
  CHECK_THROWS_AS(frobenius_inner(Hermitian::Zero(2), Hermitian::Zero(3)),
                  DimensionMismatch);
}

TEST_CASE("norms on closed-form instances") {
  const MatrixNorms zero = norms(Hermitian::Zero(3));
  CHECK(zero.frobenius == 0.0);
  CHECK(zero.op == 0.0);
  CHECK(zero.nuclear == 0.0);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  const MatrixNorms diag = norms(Hermitian(d));
  CHECK(diag.frobenius == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(diag.op == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(diag.nuclear == doctest::Approx(7.0).epsilon(1e-14));

  const MatrixNorms ident = norms(Hermitian::Identity(3));
  CHECK(ident.frobenius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(ident.op == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ident.nuclear == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("norm chain and inner-product identity on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Hermitian a = random_hermitian(rng, 2 + static_cast<int>(rng.integer(4)));
    const MatrixNorms na = norms(a);
    CHECK(na.op <= na.frobenius + 1e-12);
    CHECK(na.frobenius <= na.nuclear + 1e-12);
    CHECK(frobenius_inner(a, a) ==
          doctest::Approx(na.frobenius * na.frobenius).epsilon(1e-10));
  }
}

TEST_CASE("eigenvalue shrinkage closed forms") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Hermitian shrunk = svd_soft_threshold(Hermitian(d), 2.0);
  CHECK(shrunk(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shrunk(1, 1).real() == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(5);
  const Hermitian a = random_hermitian(rng, 3);
  const Hermitian same = svd_soft_threshold(a, 0.0);
  CHECK((same.mat() - a.mat()).norm() == doctest::Approx(0.0));

  CMatrix c(2, 2);
  c << 2.0, 1.0, 1.0, 2.0;
  const Hermitian prox = svd_soft_threshold(Hermitian(c), 1.5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(prox(i, j).real() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("shrinkage minimizes the prox objective (grid-search check)") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Hermitian a = random_real_symmetric_2x2(rng);
    const double t = rng.uniform(0.0, 2.0);
    const Hermitian prox = svd_soft_threshold(a, t);
    Eigen::Matrix2d target;
    target << a(0, 0).real(), a(0, 1).real(), a(1, 0).real(), a(1, 1).real();
    const double value = oracles::prox_objective_2x2(
        prox(0, 0).real(), prox(0, 1).real(), prox(1, 1).real(), target, t);
    const double grid_best = oracles::prox_grid_min_2x2(target, t);
    CHECK(value <= grid_best + 1e-3);
  }
}

TEST_CASE("shrinkage does not increase rank") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Hermitian a = random_hermitian(rng, 4);
    const Hermitian prox = svd_soft_threshold(a, rng.uniform(0.0, 1.0));
    CHECK(numerical_rank(prox) <= numerical_rank(a));
    CHECK(prox.symmetry_defect() == 0.0);
  }
}

TEST_CASE("block shrinkage applies per block") {
  CMatrix b1 = CMatrix::Zero(2, 2);
  b1(0, 0) = 3.0;
  b1(1, 1) = 1.0;
  const BlockDiag s({Hermitian(b1), Hermitian::Zero(2)});
  const BlockDiag shrunk = block_soft_threshold(s, 2.0);
  CHECK(shrunk.block(0)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shrunk.block(0)(1, 1).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(norms(shrunk.block(1)).frobenius == 0.0);

  const BlockDiag untouched = block_soft_threshold(s, 0.0);
  CHECK((untouched.block(0).mat() - b1).norm() == doctest::Approx(0.0));

  Rng rng(3);
  const Hermitian single = random_hermitian(rng, 3);
  const BlockDiag one({single});
  const BlockDiag via_block = block_soft_threshold(one, 0.7);
  const Hermitian direct = svd_soft_threshold(single, 0.7);
  CHECK((via_block.block(0).mat() - direct.mat()).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("block nuclear norm is the sum over blocks") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Hermitian> blocks;
    double sum = 0.0;
    for (int b = 0; b < 3; ++b) {
      blocks.push_back(random_hermitian(rng, 3));
      sum += norms(blocks.back()).nuclear;
    }
    CHECK(norms(BlockDiag(blocks)).nuclear == doctest::Approx(sum).epsilon(1e-10));
  }
}

TEST_CASE("blocks of mixed dimension are rejected") {
  CHECK_THROWS_AS(BlockDiag({Hermitian::Zero(2), Hermitian::Zero(3)}),
                  DimensionMismatch);
}

TEST_CASE("construction rejects non-hermitian input") {
  CMatrix bad(2, 2);
  bad << Complex(1.0), Complex(2.0), Complex(3.0), Complex(4.0);
  CHECK_THROWS_AS(Hermitian{bad}, InvalidArgument);
  CHECK_THROWS_AS(Hermitian{CMatrix::Zero(2, 3)}, DimensionMismatch);
}

TEST_CASE("text round trip is exact") {
  Rng rng(41);
  const Hermitian a = random_hermitian(rng, 4);
  std::stringstream stream;
  save_matrix(stream, a);
  const Hermitian back = load_matrix(stream);
  CHECK((a.mat() - back.mat()).norm() == 0.0);
}

TEST_CASE("text format accepts upper triangle only") {
  std::stringstream stream;
  stream << "2\n1 1 1.5 0\n1 2 0.25 -0.75\n2 2 -2.0 0\n";
  const Hermitian a = load_matrix(stream);
  CHECK(a(1, 0) == Complex(0.25, 0.75));
  CHECK(a(0, 1) == Complex(0.25, -0.75));
}
