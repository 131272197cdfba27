#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adiacont/hamiltonian.hpp"
#include "adiacont/lattice.hpp"
#include "adiacont/operators.hpp"

namespace testing {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix pauli_matrix(char p) {
  Matrix m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Matrix::Identity(2, 2);
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Tensor product over `n` legs with `ops[k]` on leg k (first leg most significant).
inline Matrix product(const std::vector<char>& ops) {
  Matrix out = Matrix::Identity(1, 1);
  for (char p : ops) out = kron(out, pauli_matrix(p));
  return out;
}

inline Matrix single(int n, int leg, char p) {
  std::vector<char> ops(static_cast<std::size_t>(n), 'I');
  ops[static_cast<std::size_t>(leg)] = p;
  return product(ops);
}

/// -sum Z_j + s lambda sum X_j X_{j+1} on a ring of n sites, built by Kronecker products.
inline Matrix ring_hamiltonian(int n, double lambda, double s) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    h -= single(n, j, 'Z');
    h += s * lambda * single(n, j, 'X') * single(n, (j + 1) % n, 'X');
  }
  return h;
}

inline double svd_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline Matrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return (m + m.adjoint()) * 0.5;
}

inline adiacont::ParamHamiltonian chain(int m, double lambda) {
  return adiacont::perturbed_classical(adiacont::Lattice(1, m), lambda);
}

inline adiacont::Site site1(int x) { return adiacont::Site{{x, 0}}; }

}  // namespace testing
