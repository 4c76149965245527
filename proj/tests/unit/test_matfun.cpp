#include <cmath>

#include <doctest.h>

#include "stochcone/error.hpp"
#include "stochcone/matfun.hpp"
#include "stochcone/random.hpp"

using namespace stochcone;

namespace {

double fro(const Eigen::MatrixXd& a) { return a.norm(); }

void check_decomposition(const SymMatrix& a) {
  const SpectralDecomposition s = eigh(a);
  const Eigen::MatrixXd& q = s.eigenvectors;
  const auto n = q.rows();
  CHECK(fro(q * s.eigenvalues.asDiagonal() * q.transpose() - a.matrix()) <= 1e-10 * (1.0 + a.frobenius_norm()));
  CHECK(fro(q.transpose() * q - Eigen::MatrixXd::Identity(n, n)) <= 1e-10);
  for (Eigen::Index i = 1; i < n; ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
}

}  // namespace

TEST_CASE("SymMatrix symmetrizes and rejects non-finite input") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 4, 3;
  const SymMatrix s(a);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(SymMatrix{a}, DomainError);
  CHECK_THROWS_AS(SymMatrix::from_row_major(2, std::vector<double>{1, 2, 3}), DimensionError);
}

TEST_CASE("eigh on hand-checked matrices") {
  SUBCASE("identity") {
    const SpectralDecomposition s = eigh(SymMatrix::identity(2));
    CHECK(s.eigenvalues(0) == 1.0);
    CHECK(s.eigenvalues(1) == 1.0);
    check_decomposition(SymMatrix::identity(2));
  }
  SUBCASE("diagonal sorted ascending") {
    const SpectralDecomposition s = eigh(SymMatrix::diagonal({3.0, 1.0}));
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(3.0));
  }
  SUBCASE("[[2,1],[1,2]]: roots of l^2 - 4l + 3") {
    const SymMatrix a = SymMatrix::from_row_major(2, std::vector<double>{2, 1, 1, 2});
    const SpectralDecomposition s = eigh(a);
    CHECK(std::abs(s.eigenvalues(0) - 1.0) < 1e-14);
    CHECK(std::abs(s.eigenvalues(1) - 3.0) < 1e-14);
    check_decomposition(a);
  }
}

TEST_CASE("eigh reconstruction on random symmetric matrices up to d = 16") {
  Rng rng(11);
  for (std::size_t d : {1, 2, 3, 5, 8, 16}) {
    for (int trial = 0; trial < 5; ++trial) check_decomposition(random_symmetric(d, rng) * 10.0);
  }
}

TEST_CASE("matrix functions") {
  const SymMatrix a = SymMatrix::from_row_major(2, std::vector<double>{2, 1, 1, 2});
  CHECK(fro(matrix_fn(SymMatrix::identity(3), MatrixFunction::log()).matrix()) == 0.0);
  const SymMatrix r = matrix_fn(SymMatrix::diagonal({4.0, 9.0}), MatrixFunction::sqrt());
  CHECK(r(0, 0) == 2.0);
  CHECK(r(1, 1) == 3.0);
  CHECK(r(0, 1) == 0.0);
  CHECK(fro(matrix_fn(matrix_fn(a, MatrixFunction::log()), MatrixFunction::exp()).matrix() - a.matrix()) <= 1e-10);

  const SymMatrix indefinite = SymMatrix::diagonal({1.0, -2.0});
  CHECK_THROWS_AS(matrix_fn(indefinite, MatrixFunction::log()), DomainError);
  CHECK_THROWS_AS(matrix_fn(indefinite, MatrixFunction::pow(0.5)), DomainError);
  CHECK_NOTHROW(matrix_fn(indefinite, MatrixFunction::exp()));
  try {
    matrix_fn(indefinite, MatrixFunction::sqrt());
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("-2") != std::string::npos);
  }
}

TEST_CASE("congruence") {
  const SymMatrix a = SymMatrix::from_row_major(2, std::vector<double>{2, 1, 1, 2});
  const SymMatrix b = SymMatrix::from_row_major(2, std::vector<double>{1, 0.5, 0.5, 3});
  CHECK(congruence(a, SymMatrix::identity(2)) == a);
  CHECK(fro(congruence(SymMatrix::identity(2), b).matrix() - b.matrix() * b.matrix()) < 1e-15);
  const SymMatrix c = congruence(SymMatrix::diagonal({1.0, 4.0}), SymMatrix::diagonal({1.0, 0.5}));
  CHECK(c == SymMatrix::identity(2));
  CHECK_THROWS_AS(congruence(a, SymMatrix::identity(3)), DimensionError);
}

TEST_CASE("spectral identities on random positive-definite matrices") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.index(6);
    const SymMatrix a = random_posdef(d, rng, 0.8).sym();
    CHECK(eigh(a).min_eigenvalue() > 0.0);
    CHECK(fro(matrix_fn(matrix_fn(a, MatrixFunction::log()), MatrixFunction::exp()).matrix() - a.matrix()) <= 1e-9);
    const Eigen::MatrixXd r = matrix_fn(a, MatrixFunction::sqrt()).matrix();
    CHECK(fro(r * r - a.matrix()) <= 1e-9);
    const Eigen::MatrixXd inv = matrix_fn(a, MatrixFunction::inv()).matrix();
    CHECK(fro(inv * a.matrix() - Eigen::MatrixXd::Identity(a.matrix().rows(), a.matrix().cols())) <= 1e-9);
    const Eigen::MatrixXd is = matrix_fn(a, MatrixFunction::inv_sqrt()).matrix();
    CHECK(fro(is * a.matrix() * is - Eigen::MatrixXd::Identity(a.matrix().rows(), a.matrix().cols())) <= 1e-9);
  }
}
