#include "adiacont/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <lapacke.h>

#include "adiacont/errors.hpp"

namespace adiacont {

namespace {

void check_square(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
}

Eigen::VectorXd real_eigen(Eigen::MatrixXd& a, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw NumericalFailure("dsyevd failed with info=" + std::to_string(info));
  return w;
}

Eigen::VectorXd complex_eigen(Eigen::MatrixXcd& a, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                         w.data());
  if (info != 0) throw NumericalFailure("zheevd failed with info=" + std::to_string(info));
  return w;
}

}  // namespace

bool is_real(const Eigen::MatrixXcd& m) { return (m.imag().array() == 0.0).all(); }

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& h) {
  check_square(h);
  EigenSystem out;
  if (is_real(h)) {
    Eigen::MatrixXd a = h.real();
    out.values = real_eigen(a, true);
    out.vectors = a.cast<std::complex<double>>();
    out.real = true;
  } else {
    Eigen::MatrixXcd a = h;
    out.values = complex_eigen(a, true);
    out.vectors = std::move(a);
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  check_square(h);
  if (is_real(h)) {
    Eigen::MatrixXd a = h.real();
    return real_eigen(a, false);
  }
  Eigen::MatrixXcd a = h;
  return complex_eigen(a, false);
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  const Eigen::VectorXd ev = hermitian_eigenvalues(gram);
  return std::sqrt(std::max(ev.maxCoeff(), 0.0));
}

double hermitian_norm(const Eigen::MatrixXcd& h) {
  if (h.size() == 0) return 0.0;
  const Eigen::VectorXd ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd d = u.adjoint() * u;
  d.diagonal().array() -= 1.0;
  return hermitian_norm(d);
}

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& u) {
  const EigenSystem gram = hermitian_eigensystem(u.adjoint() * u);
  if (gram.values.minCoeff() <= 0.0) throw NumericalFailure("polar projection of a singular matrix");
  const Eigen::VectorXd inv_sqrt = gram.values.array().rsqrt();
  return u * (gram.vectors * inv_sqrt.asDiagonal() * gram.vectors.adjoint());
}

double projector_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  // For unit vectors the distance equals the norm of the component of `a`
  // orthogonal to `b`; this form avoids the cancellation in sqrt(1 - |<a|b>|^2).
  const Eigen::VectorXcd ua = a.normalized();
  const Eigen::VectorXcd ub = b.normalized();
  return (ua - ub * ub.dot(ua)).norm();
}

}  // namespace adiacont
