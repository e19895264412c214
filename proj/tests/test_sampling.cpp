#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "lrmf/rng.hpp"
#include "lrmf/sampling.hpp"
#include "lrmf/truth.hpp"

using namespace lrmf;

namespace {

Hermitian random_hermitian(Rng& rng, int m) {
  CMatrix raw(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      raw(i, j) = Complex(rng.symmetric(1.0), rng.symmetric(1.0));
  return Hermitian(0.5 * (raw + raw.adjoint().eval()));
}

}  // namespace

TEST_CASE("basis elements match their definitions") {
  const Hermitian diag = basis_element(BasisIndex::diagonal(1), 2);
  CHECK(diag(0, 0) == Complex(1.0, 0.0));
  CHECK(diag(0, 1) == Complex(0.0, 0.0));
  CHECK(diag(1, 1) == Complex(0.0, 0.0));

  const Hermitian sym = basis_element(BasisIndex::real_sym(1, 2), 2);
  CHECK(sym(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sym(1, 0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sym(0, 0) == Complex(0.0, 0.0));

  const Hermitian skew = basis_element(BasisIndex::imag_antisym(1, 2), 2);
  CHECK(skew(0, 1).real() == 0.0);
  CHECK(skew(0, 1).imag() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(skew(1, 0).imag() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(skew.symmetry_defect() == 0.0);
  CHECK(norms(skew).frobenius == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("basis indices validate and enumerate") {
  CHECK_THROWS_AS(basis_element(BasisIndex::diagonal(3), 2), InvalidArgument);
  CHECK_THROWS_AS(basis_element(BasisIndex::real_sym(2, 2), 3), InvalidArgument);
  CHECK_THROWS_AS(basis_element(BasisIndex::real_sym(3, 2), 3), InvalidArgument);

  for (int m : {1, 2, 3, 5}) {
    CHECK(BasisIndex::count(m) == m * m);
    for (int c = 0; c < m * m; ++c) {
      const BasisIndex idx = BasisIndex::from_ordinal(m, c);
      CHECK(idx.ordinal(m) == c);
    }
  }
}

TEST_CASE("basis orthonormality is exhaustive for small m") {
  for (int m = 1; m <= 5; ++m) {
    for (int a = 0; a < m * m; ++a)
      for (int b = 0; b < m * m; ++b) {
        const double inner =
            frobenius_inner(basis_element(BasisIndex::from_ordinal(m, a), m),
                            basis_element(BasisIndex::from_ordinal(m, b), m));
        CHECK(inner == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
      }
  }
}

TEST_CASE("sampling isometry: mean squared coordinate is the scaled norm") {
  Rng rng(13);
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 5; ++trial) {
      const Hermitian a = random_hermitian(rng, m);
      double sum = 0.0;
      for (int c = 0; c < m * m; ++c) {
        const double inner =
            frobenius_inner(a, basis_element(BasisIndex::from_ordinal(m, c), m));
        sum += inner * inner;
      }
      const double norm_sq = norms(a).frobenius * norms(a).frobenius;
      CHECK(sum / (m * m) == doctest::Approx(norm_sq / (m * m)).epsilon(1e-10));
    }
  }
}

TEST_CASE("fast coordinate read agrees with the dense inner product") {
  Rng rng(37);
  const CMatrix raw = [] {
    CMatrix s(2, 2);
    s << Complex(0, 0), Complex(1, 2), Complex(1, -2), Complex(0, 0);
    return s;
  }();
  const Hermitian sh(raw);
  CHECK(inner_with_basis(sh, BasisIndex::real_sym(1, 2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(inner_with_basis(sh, BasisIndex::imag_antisym(1, 2)) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(inner_with_basis(Hermitian::Identity(3), BasisIndex::diagonal(2)) == 1.0);

  for (int m = 1; m <= 5; ++m) {
    const Hermitian s = random_hermitian(rng, m);
    for (int c = 0; c < m * m; ++c) {
      const BasisIndex idx = BasisIndex::from_ordinal(m, c);
      CHECK(inner_with_basis(s, idx) ==
            doctest::Approx(frobenius_inner(s, basis_element(idx, m)))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("constant truth evaluates to its matrix") {
  const Hermitian e11 = basis_element(BasisIndex::diagonal(1), 3);
  const MatrixFunctionSpec spec = MatrixFunctionSpec::constant(e11);
  for (double t : {0.0, 0.25, 1.0})
    CHECK((evaluate_truth(spec, t).mat() - e11.mat()).norm() == 0.0);
  CHECK(spec.rank_bound() == 1);
  CHECK_THROWS_AS(evaluate_truth(spec, 1.5), InvalidArgument);
}

TEST_CASE("diffusion truth vanishes where the profile does") {
  CMatrix base = CMatrix::Zero(3, 3);
  base(0, 0) = 1.0;
  base(1, 1) = 0.5;
  const MatrixFunctionSpec spec = MatrixFunctionSpec::diffusion(
      Hermitian(base), {0.0, 1.0}, 1.5, 24.0, 1.0);
  CHECK(norms(evaluate_truth(spec, 0.0)).frobenius == 0.0);
  const Hermitian mid = evaluate_truth(spec, 0.5);
  const Hermitian end = evaluate_truth(spec, 1.0);
  CHECK(mid(0, 0).real() == doctest::Approx(0.5 * end(0, 0).real()).epsilon(1e-12));
}

TEST_CASE("factor model is the outer product of its curves") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::factor_model(4, 1, 1.5, 24.0, 1.0, 99);
  const Eigen::MatrixXd p = spec.factor_value(0.5);
  const Hermitian a = evaluate_truth(spec, 0.5);
  const Eigen::MatrixXd outer = p * p.transpose();
  CHECK((a.mat().real() - outer).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(numerical_rank(a) <= 1);

  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    const Hermitian at = evaluate_truth(spec, t);
    for (int c = 0; c < 16; ++c) {
      const BasisIndex idx = BasisIndex::from_ordinal(4, c);
      CHECK(std::abs(inner_with_basis(at, idx)) <= spec.a1() + 1e-9);
      CHECK(spec.coordinate(t, idx) ==
            doctest::Approx(inner_with_basis(at, idx)).epsilon(1e-12));
    }
  }
}

TEST_CASE("euclidean distance truth has bounded rank and zero diagonal") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::euclidean_distance(8, 2, 1.5, 24.0, 1.0, 5);
  for (double t : {0.1, 0.6}) {
    const Hermitian d = evaluate_truth(spec, t);
    for (int i = 0; i < 8; ++i) CHECK(d(i, i).real() == 0.0);
    CHECK(numerical_rank(d) <= 4);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) CHECK(d(i, j).real() >= -1e-15);
  }
}

TEST_CASE("noiseless zero function produces all-zero responses") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::constant(Hermitian::Zero(3));
  const Dataset data = generate_dataset(spec, 500, 0.0, 21);
  for (const auto& o : data.observations()) CHECK(o.y == 0.0);
  CHECK_THROWS_AS(generate_dataset(spec, 0, 0.0, 21), InvalidArgument);
}

TEST_CASE("empirical coordinate mean matches the truth (large-sample check)") {
  const Hermitian a0 = [] {
    CMatrix c = CMatrix::Zero(2, 2);
    c(0, 0) = 0.8;
    c(1, 1) = -0.3;
    return Hermitian(c);
  }();
  const MatrixFunctionSpec spec = MatrixFunctionSpec::constant(a0);
  const Dataset data = generate_dataset(spec, 100000, 0.25, 20240811);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& o : data.observations()) {
    if (!(o.x == BasisIndex::diagonal(1))) continue;
    sum += o.y;
    sum_sq += o.y * o.y;
    ++count;
  }
  REQUIRE(count > 1000);
  const double mean = sum / count;
  const double sd = std::sqrt((sum_sq / count - mean * mean) / count);
  CHECK(std::abs(mean - 0.8) <= 3.0 * sd);
}

TEST_CASE("basis draw frequencies pass a uniformity check") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::constant(Hermitian::Zero(2));
  const Dataset data = generate_dataset(spec, 10000, 0.0, 4242);
  std::vector<int> counts(4, 0);
  for (const auto& o : data.observations()) ++counts[o.x.ordinal(2)];
  const double expected = 10000.0 / 4.0;
  double chi_sq = 0.0;
  for (const int c : counts)
    chi_sq += (c - expected) * (c - expected) / expected;
  // 1% critical value of chi-squared with 3 degrees of freedom
  CHECK(chi_sq < 11.345);
}

TEST_CASE("generation is reproducible and seed-sensitive") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::factor_model(3, 2, 1.5, 24.0, 1.0, 7);
  const Dataset a = generate_dataset(spec, 200, 0.5, 77);
  const Dataset b = generate_dataset(spec, 200, 0.5, 77);
  const Dataset c = generate_dataset(spec, 200, 0.5, 78);
  REQUIRE(a.size() == b.size());
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.observations()[i].tau != b.observations()[i].tau ||
        a.observations()[i].y != b.observations()[i].y ||
        !(a.observations()[i].x == b.observations()[i].x))
      identical = false;
    if (a.observations()[i].y != c.observations()[i].y) differs = true;
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("two-point noise takes exactly two values") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::constant(Hermitian::Zero(2));
  const Dataset data =
      generate_dataset(spec, 400, 0.7, 3, NoiseKind::TwoPoint);
  for (const auto& o : data.observations())
    CHECK(std::abs(std::abs(o.y) - 0.7) < 1e-15);
}

TEST_CASE("dataset file round trip") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::factor_model(3, 1, 1.5, 24.0, 1.0, 15);
  const Dataset data = generate_dataset(spec, 150, 0.4, 5);
  const std::string path =
      (std::filesystem::temp_directory_path() / "lrmf_dataset_test.csv").string();
  save_dataset(data, path);
  const Dataset back = load_dataset(path);
  REQUIRE(back.size() == data.size());
  CHECK(back.m() == data.m());
  CHECK(back.a() == data.a());
  CHECK(back.seed() == data.seed());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.observations()[i].tau == data.observations()[i].tau);
    CHECK(back.observations()[i].y == data.observations()[i].y);
    CHECK(back.observations()[i].x == data.observations()[i].x);
  }
  std::remove(path.c_str());
  std::remove((path + ".meta").c_str());
}

TEST_CASE("dataset rejects out-of-bound responses") {
  std::vector<Observation> obs{{0.5, BasisIndex::diagonal(1), 2.0}};
  CHECK_THROWS_AS(Dataset(obs, 2, 1.0, 0), InvalidArgument);
}

TEST_CASE("derivative ranks are recorded") {
  const MatrixFunctionSpec spec =
      MatrixFunctionSpec::factor_model(6, 2, 1.5, 24.0, 1.0, 31);
  REQUIRE(spec.derivative_ranks().size() == 2);
  CHECK(spec.derivative_ranks()[0] <= 2);
  CHECK(spec.derivative_ranks()[1] <= 4);
  CHECK(spec.describe().find("deriv_ranks=") != std::string::npos);
}

TEST_CASE("rough diffusion profile: kinks, budget, and rank") {
  CMatrix base = CMatrix::Zero(3, 3);
  base(0, 0) = 2.0;
  base(0, 1) = base(1, 0) = 1.0;
  const MatrixFunctionSpec spec = MatrixFunctionSpec::diffusion_rough(
      Hermitian(base), {0.5}, {1.0}, {}, 24.0, 1.0);

  // profile is |t - 1/2|^{3/2} up to the matrix scale
  const double left = spec.value(0.25)(0, 0).real();
  const double right = spec.value(0.75)(0, 0).real();
  CHECK(left == doctest::Approx(right).epsilon(1e-12));
  CHECK(spec.value(0.5)(0, 0).real() == doctest::Approx(0.0).epsilon(1e-12));
  const double quarter = std::pow(0.25, 1.5), eighth = std::pow(0.125, 1.5);
  CHECK(left / spec.value(0.375)(0, 0).real() ==
        doctest::Approx(quarter / eighth).epsilon(1e-10));

  CHECK(spec.rank_bound() == numerical_rank(Hermitian(base)));
  CHECK(spec.realized_amplitude() <= spec.a1() * (1.0 + 1e-9));

  // every entry's derivative satisfies the 1/2-Hoelder inequality with the
  // declared budget; pairs straddling the kink are the extremal ones
  const double entry_scale = spec.value(1.0)(0, 0).real() / std::pow(0.5, 1.5);
  auto entry_deriv = [&](double t) {
    return entry_scale * 1.5 *
           std::copysign(std::sqrt(std::abs(t - 0.5)), t - 0.5);
  };
  for (double gap : {0.3, 0.1, 0.01, 1e-4}) {
    const double holder_ratio =
        std::abs(entry_deriv(0.5 + gap) - entry_deriv(0.5 - gap)) /
        std::sqrt(2.0 * gap);
    CHECK(holder_ratio <= 24.0 + 1e-9);
  }

  // coordinate path agrees with the dense value
  for (double t : {0.2, 0.5, 0.9})
    for (int c = 0; c < 9; ++c) {
      const BasisIndex idx = BasisIndex::from_ordinal(3, c);
      CHECK(spec.coordinate(t, idx) ==
            doctest::Approx(inner_with_basis(spec.value(t), idx)).epsilon(1e-12));
    }

  CHECK_THROWS_AS(MatrixFunctionSpec::diffusion_rough(Hermitian(base), {}, {},
                                                      {}, 24.0, 1.0),
                  InvalidArgument);
}
