#include <doctest.h>

#include <random>

#include "adiacont/linalg.hpp"
#include "support.hpp"

using namespace adiacont;
using testing::Matrix;

TEST_CASE("eigensystem matches Eigen's self-adjoint solver") {
  std::mt19937 rng(1);
  for (int dim : {1, 2, 7, 16}) {
    const Matrix h = testing::random_hermitian(dim, rng);
    const EigenSystem eig = hermitian_eigensystem(h);
    const Eigen::SelfAdjointEigenSolver<Matrix> oracle(h);
    CHECK((eig.values - oracle.eigenvalues()).norm() < 1e-12);
    CHECK((h * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() < 1e-11);
    CHECK((eig.vectors.adjoint() * eig.vectors - Matrix::Identity(dim, dim)).norm() < 1e-12);
    if (dim > 1) CHECK_FALSE(eig.real);
    CHECK((hermitian_eigenvalues(h) - oracle.eigenvalues()).norm() < 1e-12);
  }
}

TEST_CASE("real symmetric input takes the real path") {
  std::mt19937 rng(2);
  Matrix h = testing::random_hermitian(9, rng);
  h = Matrix(h.real().cast<testing::Complex>());
  const EigenSystem eig = hermitian_eigensystem(h);
  CHECK(eig.real);
  CHECK(is_real(eig.vectors));
  CHECK((h * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() < 1e-11);
}

TEST_CASE("norms") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Matrix a(6, 4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = testing::Complex(g(rng), g(rng));
  CHECK(spectral_norm(a) == doctest::Approx(testing::svd_norm(a)).epsilon(1e-12));
  const Matrix h = testing::random_hermitian(8, rng);
  CHECK(hermitian_norm(h) == doctest::Approx(testing::svd_norm(h)).epsilon(1e-12));
}

TEST_CASE("polar repair restores unitarity") {
  std::mt19937 rng(4);
  const Matrix h = testing::random_hermitian(8, rng);
  const EigenSystem eig = hermitian_eigensystem(h);
  Matrix u = eig.vectors;
  CHECK(unitarity_defect(u) < 1e-13);
  u(0, 0) += 1e-7;
  CHECK(unitarity_defect(u) > 1e-8);
  const Matrix fixed = polar_unitary(u);
  CHECK(unitarity_defect(fixed) < 1e-13);
  CHECK((fixed - u).norm() < 2e-7);
}

TEST_CASE("projector distance matches the operator norm of the projector difference") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXcd a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a(i) = testing::Complex(g(rng), g(rng));
      b(i) = testing::Complex(g(rng), g(rng));
    }
    if (trial == 0) b = a * testing::Complex(0.0, -3.0);
    const Eigen::VectorXcd ua = a.normalized();
    const Eigen::VectorXcd ub = b.normalized();
    const double oracle = testing::svd_norm(ua * ua.adjoint() - ub * ub.adjoint());
    CHECK(projector_distance(a, b) == doctest::Approx(oracle).epsilon(1e-10).scale(1.0));
  }
}
