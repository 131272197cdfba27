#pragma once

#include <Eigen/Dense>

namespace adiacont {

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  /// Set when the input had no imaginary part; `vectors` is then real.
  bool real = false;
};

// Thin wrappers over LAPACK's divide-and-conquer drivers (dsyevd / zheevd).
// Matrices with identically zero imaginary part take the real path.
EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& h);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

bool is_real(const Eigen::MatrixXcd& m);

/// Largest singular value via the eigenvalues of A^dagger A.
double spectral_norm(const Eigen::MatrixXcd& a);

/// max |eigenvalue| of a Hermitian matrix.
double hermitian_norm(const Eigen::MatrixXcd& h);

/// ||U^dagger U - 1||.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Unitary factor of the polar decomposition, U (U^dagger U)^{-1/2}.
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& u);

/// Operator norm of |a><a| - |b><b| for (not necessarily normalized) vectors.
double projector_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace adiacont
