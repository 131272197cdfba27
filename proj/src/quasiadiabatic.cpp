#include "adiacont/quasiadiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adiacont/errors.hpp"

namespace adiacont {

DenseOperator apply_filter_map(const DenseOperator& m, const EigenSystem& eig, const BumpFilter& filter) {
  if (eig.vectors.rows() != m.dim()) throw std::invalid_argument("eigensystem does not match the operator window");
  const Eigen::MatrixXd w = filter.spectral_weight_matrix(eig.values);
  if (eig.real && is_real(m.matrix())) {
    // real eigenvectors and real M: F(M) = i U (W o U^T M U) U^T with W real
    const Eigen::MatrixXd u = eig.vectors.real();
    const Eigen::MatrixXd rotated = u.transpose() * m.matrix().real() * u;
    const Eigen::MatrixXd back = u * w.cwiseProduct(rotated) * u.transpose();
    Eigen::MatrixXcd out(back.rows(), back.cols());
    out.real().setZero();
    out.imag() = back;
    return DenseOperator(m.window(), std::move(out));
  }
  const Eigen::MatrixXcd& u = eig.vectors;
  Eigen::MatrixXcd rotated = u.adjoint() * m.matrix() * u;
  rotated = rotated.cwiseProduct(w.cast<Complex>()) * Complex(0.0, 1.0);
  return DenseOperator(m.window(), u * rotated * u.adjoint());
}

DenseOperator apply_filter_map(const DenseOperator& m, const DenseOperator& h, const BumpFilter& filter) {
  if (m.window() != h.window()) {
    throw std::invalid_argument("filter map needs M and H on the same window: " + to_string(m.window()) +
                                " vs " + to_string(h.window()));
  }
  check_dense_window(h.window(), kMaxSpectralSites);
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("filter map needs a Hermitian Hamiltonian");
  return apply_filter_map(m, hermitian_eigensystem(h.matrix()), filter);
}

SiteSet region_ball(const Site& center, int radius, const Lattice& lat) {
  return ball(center, std::min(radius, covering_radius(lat)), lat);
}

DenseOperator filtered_driving_term(const ParamHamiltonian& h, double s, const SiteSet& region, const Site& j,
                                    const BumpFilter& filter) {
  const LocalOperator driving = h.driving_term(j);
  const SiteSet window = h.window(region).united(driving.support());
  check_dense_window(window, kMaxSpectralSites);
  return apply_filter_map(embed(driving, window), h.assemble(s, region, window), filter);
}

DenseOperator full_generator(const ParamHamiltonian& h, double s, const BumpFilter& filter) {
  const SiteSet all = h.lattice().all_sites();
  check_dense_window(all, kMaxSpectralSites);
  return apply_filter_map(embed(h.restricted_driving(all), all), h.assemble(s), filter);
}

QuasiLocalTerm shell_term(const ParamHamiltonian& h, double s, const Site& center, int alpha,
                          const BumpFilter& filter) {
  if (alpha < 0) throw std::invalid_argument("shell index must be nonnegative");
  const Lattice& lat = h.lattice();
  DenseOperator outer = filtered_driving_term(h, s, region_ball(center, alpha, lat), center, filter);
  if (alpha > 0) {
    const DenseOperator inner = filtered_driving_term(h, s, region_ball(center, alpha - 1, lat), center, filter);
    outer -= inner.extended_to(outer.window());
  }
  return QuasiLocalTerm{center, alpha, s, std::move(outer)};
}

void DecayCurve::fit_envelope(double x_min) {
  envelope = PowerLawFit{};
  envelope.x_min = x_min;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_min || x[i] <= 0.0 || !(value[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(value[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  if (count < 2 || denom <= 0.0) return;
  envelope.exponent = (count * sxy - sx * sy) / denom;
  envelope.prefactor = std::exp((sy - envelope.exponent * sx) / count);
  envelope.valid = true;
}

double DecayCurve::envelope_at(double xv) const {
  if (!envelope.valid || xv <= 0.0) return std::nan("");
  return envelope.prefactor * std::pow(xv, envelope.exponent);
}

std::string to_csv(const DecayCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "# abscissa=" << curve.label << '\n';
  for (const auto& [k, v] : curve.metadata) out << "# " << k << '=' << v << '\n';
  if (curve.envelope.valid) {
    out << "# envelope_prefactor=" << curve.envelope.prefactor << '\n';
    out << "# envelope_exponent=" << curve.envelope.exponent << '\n';
    out << "# envelope_x_min=" << curve.envelope.x_min << '\n';
  }
  out << "x,value,envelope_fit\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    out << curve.x[i] << ',' << curve.value[i] << ',';
    const double e = curve.envelope_at(curve.x[i]);
    if (!std::isnan(e)) out << e;
    out << '\n';
  }
  return out.str();
}

DecayCurve shell_decay_curve(const ParamHamiltonian& h, double s, const Site& center, int alpha_max,
                             const BumpFilter& filter) {
  if (alpha_max < 0) throw std::invalid_argument("alpha_max must be nonnegative");
  DecayCurve curve;
  curve.label = "alpha";
  const Lattice& lat = h.lattice();
  DenseOperator previous;
  for (int alpha = 0; alpha <= alpha_max; ++alpha) {
    DenseOperator current = filtered_driving_term(h, s, region_ball(center, alpha, lat), center, filter);
    double norm = 0.0;
    if (alpha == 0) {
      norm = op_norm(current);
    } else if (current.window() == previous.window() && alpha > covering_radius(lat)) {
      norm = 0.0;  // identical restricted Hamiltonians
    } else {
      norm = op_norm(current - previous.extended_to(current.window()));
    }
    curve.x.push_back(alpha);
    curve.value.push_back(norm);
    previous = std::move(current);
  }
  return curve;
}

SiteSet generator_window(const ParamHamiltonian& h, const Site& center, int alpha, int beta) {
  const Lattice& lat = h.lattice();
  SiteSet window;
  for (const auto& j : region_ball(center, alpha, lat)) {
    window = window.united(h.window(region_ball(j, beta, lat))).united(h.driving_term(j).support());
  }
  return window;
}

TruncatedGenerator assemble_truncated_generator(const ParamHamiltonian& h, double s, int alpha, int beta,
                                                const BumpFilter& filter, const Site& center) {
  if (alpha < 0 || beta < 0) throw std::invalid_argument("truncation radii must be nonnegative");
  const Lattice& lat = h.lattice();
  const SiteSet window = generator_window(h, center, alpha, beta);
  check_dense_window(window, kMaxSpectralSites);
  DenseOperator sum = DenseOperator::zero(window);
  DenseOperator origin_term;
  if (h.translation_generated()) {
    origin_term = filtered_driving_term(h, s, region_ball(lat.origin(), beta, lat), lat.origin(), filter);
  }
  for (const auto& j : region_ball(center, alpha, lat)) {
    const DenseOperator term = h.translation_generated()
                                   ? translate(origin_term, j, lat)
                                   : filtered_driving_term(h, s, region_ball(j, beta, lat), j, filter);
    sum += term.extended_to(window);
  }
  return TruncatedGenerator{alpha, beta, s, std::move(sum)};
}

SummabilityReport summability_from_norms(std::vector<double> shell_norms, int dimension, int l) {
  SummabilityReport r;
  r.l = l;
  r.alpha_max = static_cast<int>(shell_norms.size()) - 1;
  double acc = 0.0;
  for (std::size_t a = 0; a < shell_norms.size(); ++a) {
    const double alpha = static_cast<double>(a);
    const double ball = 1.0 + 2.0 * alpha * (alpha + 1.0);
    acc += shell_norms[a] * ball * ball * std::pow(2.0 + 2.0 * alpha, dimension);
    r.partial_sums.push_back(acc);
    if (a >= 1) r.c_l = std::max(r.c_l, shell_norms[a] * std::pow(alpha, l - 1));
  }
  r.sum = acc;
  const double half = r.partial_sums[static_cast<std::size_t>(r.alpha_max / 2)];
  r.relative_change = acc > 0.0 ? (acc - half) / acc : 0.0;
  r.converged = r.relative_change < 0.01;
  r.shell_norms = std::move(shell_norms);
  return r;
}

SummabilityReport summability_check(const ParamHamiltonian& h, double s, const BumpFilter& filter, int l,
                                    int alpha_max) {
  const int eta = h.lattice().dimension();
  if (l < 7 + eta) throw std::invalid_argument("summability needs l >= 7 + eta");
  if (alpha_max < 1) throw std::invalid_argument("summability needs alpha_max >= 1");
  const DecayCurve curve = shell_decay_curve(h, s, h.lattice().origin(), alpha_max, filter);
  return summability_from_norms(curve.value, eta, l);
}

}  // namespace adiacont
