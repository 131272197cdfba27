#include "adiacont/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "adiacont/errors.hpp"
#include "adiacont/linalg.hpp"

namespace adiacont {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
constexpr Complex kI(0.0, 1.0);

void check_oracle_window(const SiteSet& window) { check_dense_window(window, kMaxOracleSites); }

EigenSystem full_spectrum(const ParamHamiltonian& h, double s) {
  const SiteSet all = h.lattice().all_sites();
  check_oracle_window(all);
  EigenSystem eig = hermitian_eigensystem(h.assemble(s).matrix());
  if (eig.values.size() > 1 && eig.values(1) - eig.values(0) < kDegeneracyThreshold) {
    std::ostringstream msg;
    msg << "degenerate ground state at s = " << s << " (splitting " << eig.values(1) - eig.values(0) << ")";
    throw AssumptionViolation(msg.str());
  }
  return eig;
}

// e^{i(E_m - E_n)t} a_eig(m, n), with a_eig = U^dagger A U.
Matrix heisenberg_rotate(const EigenSystem& eig, const Matrix& a_eig, double t) {
  const Eigen::Index n = eig.values.size();
  Matrix rotated(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      rotated(row, col) = std::polar(1.0, (eig.values(row) - eig.values(col)) * t) * a_eig(row, col);
    }
  }
  return rotated;
}

// ||[T, sigma^p]|| for Hermitian T, as 2 ||P_up W T W^dagger P_down|| with W sigma^p W^dagger = sigma^z.
double pauli_commutator_norm(const Matrix& t, std::size_t bit, Pauli p) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd w = Eigen::Matrix2cd::Identity();
  if (p == Pauli::X) w << r, r, r, -r;
  if (p == Pauli::Y) w << r, Complex(0.0, -r), r, Complex(0.0, r);
  if (p == Pauli::I) return 0.0;
  const Eigen::Index n = t.rows();
  const Eigen::Index mask = Eigen::Index{1} << bit;
  Matrix rotated = t;
  if (p != Pauli::Z) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i & mask) continue;
      const Eigen::RowVectorXcd r0 = rotated.row(i);
      const Eigen::RowVectorXcd r1 = rotated.row(i | mask);
      rotated.row(i) = w(0, 0) * r0 + w(0, 1) * r1;
      rotated.row(i | mask) = w(1, 0) * r0 + w(1, 1) * r1;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j & mask) continue;
      const Eigen::VectorXcd c0 = rotated.col(j);
      const Eigen::VectorXcd c1 = rotated.col(j | mask);
      rotated.col(j) = c0 * std::conj(w(0, 0)) + c1 * std::conj(w(0, 1));
      rotated.col(j | mask) = c0 * std::conj(w(1, 0)) + c1 * std::conj(w(1, 1));
    }
  }
  std::vector<Eigen::Index> up;
  std::vector<Eigen::Index> down;
  for (Eigen::Index i = 0; i < n; ++i) (i & mask ? down : up).push_back(i);
  Matrix block(static_cast<Eigen::Index>(up.size()), static_cast<Eigen::Index>(down.size()));
  for (std::size_t j = 0; j < down.size(); ++j) {
    for (std::size_t i = 0; i < up.size(); ++i) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rotated(up[i], down[j]);
    }
  }
  return 2.0 * spectral_norm(block);
}

}  // namespace

DenseOperator ExactPath::projector(std::size_t i) const {
  const Vector& v = ground.at(i);
  return DenseOperator(window, v * v.adjoint());
}

ExactPath exact_path(const ParamHamiltonian& h, const std::vector<double>& s_grid) {
  ExactPath path;
  path.window = h.lattice().all_sites();
  check_oracle_window(path.window);
  for (double s : s_grid) {
    const SpectrumReport r = ground_state(h.assemble(s), true, true);
    path.s.push_back(s);
    path.ground_energy.push_back(r.ground_energy);
    path.gap.push_back(r.gap);
    path.ground.push_back(r.ground_vector);
  }
  return path;
}

double exact_expectation(const ParamHamiltonian& h, double s, const LocalOperator& a) {
  return exact_expectations(h, {s}, a).front();
}

std::vector<double> exact_expectations(const ParamHamiltonian& h, const std::vector<double>& s_grid,
                                       const LocalOperator& a) {
  const ExactPath path = exact_path(h, s_grid);
  const Matrix am = embed(a, path.window).matrix();
  std::vector<double> out;
  for (const auto& v : path.ground) out.push_back(v.dot(am * v).real());
  return out;
}

ProjectorCheck projector_filter_check(const DenseOperator& h, const BumpFilter& filter, bool with_quadrature) {
  check_oracle_window(h.window());
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("projector check needs a Hermitian operator");
  const EigenSystem eig = hermitian_eigensystem(h.matrix());
  const Eigen::Index n = eig.values.size();
  const double omega = eig.values(0);

  ProjectorCheck out;
  out.gamma = filter.gamma();
  out.gap = n > 1 ? eig.values(1) - omega : std::numeric_limits<double>::infinity();
  out.warning = out.gamma >= out.gap;

  Eigen::VectorXd weights(n);
  for (Eigen::Index k = 0; k < n; ++k) weights(k) = filter.chi_hat(eig.values(k) - omega);
  for (Eigen::Index k = 1; k < n; ++k) out.leakage = std::max(out.leakage, std::abs(weights(k)));

  const Vector& ground = eig.vectors.col(0);
  const Matrix reconstructed = eig.vectors * weights.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  out.spectral_residual = hermitian_norm(reconstructed - ground * ground.adjoint());

  if (with_quadrature) {
    const double width = eig.values(n - 1) - omega;
    const TimeQuadrature q = make_time_quadrature(filter, width);
    Eigen::VectorXd quad = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = eig.values(k) - omega;
      double acc = 0.0;
      for (std::size_t i = 0; i < q.t.size(); ++i) acc += q.weight[i] * q.chi[i] * std::cos(w * q.t[i]);
      quad(k) = acc;
    }
    out.quadrature_residual = std::abs(quad(0) - 1.0);
    for (Eigen::Index k = 1; k < n; ++k) out.quadrature_residual = std::max(out.quadrature_residual, std::abs(quad(k)));
    out.path_agreement = (quad - weights).cwiseAbs().maxCoeff();
  }
  return out;
}

double pt_generator_check(const ParamHamiltonian& h, double s, const BumpFilter& filter) {
  const EigenSystem eig = full_spectrum(h, s);
  const SiteSet all = h.lattice().all_sites();
  const DenseOperator hprime = embed(h.restricted_driving(all), all);
  const Matrix k = apply_filter_map(hprime, eig, filter).matrix();
  const Vector ground = eig.vectors.col(0);
  const Vector lhs = kI * (k * ground);
  Vector coeffs = eig.vectors.adjoint() * (hprime.matrix() * ground);
  coeffs(0) = 0.0;
  for (Eigen::Index j = 1; j < coeffs.size(); ++j) coeffs(j) /= eig.values(0) - eig.values(j);
  return (lhs - eig.vectors * coeffs).norm();
}

TransportReport exact_adiabatic_generator_check(const ParamHamiltonian& h, double ds, double report_every) {
  if (!(ds > 0.0) || ds > 0.5) throw std::invalid_argument("transport step must lie in (0, 0.5]");
  const auto steps = static_cast<long>(std::llround(1.0 / ds));
  if (std::abs(steps * ds - 1.0) > 1e-9) throw std::invalid_argument("transport step must divide 1");
  const auto stride = std::max<long>(1, std::llround(report_every / ds));
  check_oracle_window(h.lattice().all_sites());

  auto ground_at = [&](double s) { return full_spectrum(h, s).vectors.col(0).eval(); };

  TransportReport out;
  out.ds = ds;
  Vector left = ground_at(0.0);
  Vector psi = left;
  out.s.push_back(0.0);
  out.error.push_back(0.0);
  for (long i = 0; i < steps; ++i) {
    const double s = static_cast<double>(i) * ds;
    const Vector mid = ground_at(s + 0.5 * ds);
    const Vector right = ground_at(static_cast<double>(i + 1) * ds);
    // G x = P'(P x) - P(P' x) with P at the midpoint and P' the central difference.
    auto apply_dp = [&](const Vector& x) -> Vector {
      return (right * right.dot(x) - left * left.dot(x)) / ds;
    };
    auto apply_g = [&](const Vector& x) -> Vector {
      const Vector px = mid * mid.dot(x);
      const Vector dpx = apply_dp(x);
      return apply_dp(px) - mid * mid.dot(dpx);
    };
    Vector term = psi;
    Vector next = psi;
    for (int order = 1; order <= 30; ++order) {
      term = apply_g(term) * (ds / order);
      next += term;
      if (term.norm() < 1e-18) break;
    }
    psi = next;
    left = right;
    const double err = projector_distance(psi, right);
    out.max_error = std::max(out.max_error, err);
    if ((i + 1) % stride == 0 || i + 1 == steps) {
      out.s.push_back(static_cast<double>(i + 1) * ds);
      out.error.push_back(err);
    }
  }
  return out;
}

TransportReport unitary_transport_check(const ParamHamiltonian& h, const BumpFilter& filter,
                                        const EvolutionConfig& cfg) {
  const Trajectory traj = evolve_full_propagator(h, cfg, filter);
  const ExactPath path = exact_path(h, cfg.s_grid);
  const Vector& psi0 = path.ground.front();
  TransportReport out;
  out.ds = cfg.ds;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double err = projector_distance(traj.states[i].v.matrix() * psi0, path.ground[i]);
    out.s.push_back(traj.states[i].s);
    out.error.push_back(err);
    out.max_error = std::max(out.max_error, err);
  }
  return out;
}

int ConeReport::cone_radius(double time) const {
  if (!fit.valid || !(fit.velocity > 0.0)) return std::numeric_limits<int>::max();
  return static_cast<int>(std::ceil(fit.rate * std::abs(time) / fit.velocity - 1e-12));
}

ConeReport lr_cone_scan(const ParamHamiltonian& h, double s, Pauli a, Pauli b, const std::vector<int>& distances,
                        const std::vector<double>& t_grid) {
  const Lattice& lat = h.lattice();
  const SiteSet all = lat.all_sites();
  check_oracle_window(all);
  std::vector<std::size_t> positions;
  for (int d : distances) {
    if (d < 0 || d > lat.extent() / 2) throw std::invalid_argument("cone distance out of range");
    positions.push_back(all.position(lat.canonical({d, 0})));
  }
  const EigenSystem eig = hermitian_eigensystem(h.assemble(s).matrix());
  const Matrix a_eig = eig.vectors.adjoint() * embed(LocalOperator::pauli(lat.origin(), a), all).matrix() *
                       eig.vectors;
  ConeReport out;
  out.t = t_grid;
  out.distance = distances;
  for (double t : t_grid) {
    const Eigen::VectorXcd phases = (Complex(0.0, t) * eig.values.cast<Complex>()).array().exp();
    const Matrix rotated_basis = eig.vectors * phases.asDiagonal();
    const Matrix tau = rotated_basis * a_eig * rotated_basis.adjoint();
    std::vector<double> row;
    for (std::size_t k = 0; k < distances.size(); ++k) {
      row.push_back(pauli_commutator_norm(tau, all.size() - 1 - positions[k], b));
    }
    out.values.push_back(std::move(row));
  }
  out.fit = fit_cone(out);
  return out;
}

ConeFit fit_cone(const ConeReport& report) {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < report.t.size(); ++i) {
    for (std::size_t k = 0; k < report.distance.size(); ++k) {
      const double v = report.values[i][k];
      if (v > kConeFloor && v < kConeCeiling) {
        rows.push_back({1.0, -static_cast<double>(report.distance[k]), std::abs(report.t[i])});
        rhs.push_back(std::log(v));
      }
    }
  }
  if (rows.size() < 3) throw AssumptionViolation("light-cone fit region has fewer than three points");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < 3; ++c) design(static_cast<Eigen::Index>(i), c) = rows[i][c];
    y(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw AssumptionViolation("light-cone fit is rank deficient");
  const Eigen::Vector3d coef = qr.solve(y);
  ConeFit fit;
  fit.valid = true;
  fit.intercept = coef(0);
  fit.velocity = coef(1);
  fit.rate = coef(2);
  fit.points = static_cast<int>(rows.size());
  fit.rms_residual = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(rows.size()));
  return fit;
}

std::string to_csv(const ConeReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "t,distance,comm_norm\n";
  for (std::size_t i = 0; i < report.t.size(); ++i) {
    for (std::size_t k = 0; k < report.distance.size(); ++k) {
      out << report.t[i] << ',' << report.distance[k] << ',' << report.values[i][k] << '\n';
    }
  }
  return out.str();
}

std::string fit_summary(const ConeReport& report) {
  nlohmann::ordered_json j;
  j["valid"] = report.fit.valid;
  j["velocity"] = report.fit.velocity;
  j["kappa"] = report.fit.rate;
  j["intercept"] = report.fit.intercept;
  j["rms_residual"] = report.fit.rms_residual;
  j["points"] = report.fit.points;
  j["fit_floor"] = kConeFloor;
  j["fit_ceiling"] = kConeCeiling;
  return j.dump(2);
}

DecayCurve boundary_difference_scan(const ParamHamiltonian& h, double s, const LocalOperator& a,
                                    const std::vector<int>& alphas, double t) {
  const Lattice& lat = h.lattice();
  std::map<int, DenseOperator> cache;
  auto evolved = [&](int alpha) -> const DenseOperator& {
    const int r = std::min(alpha, covering_radius(lat));
    if (auto it = cache.find(r); it != cache.end()) return it->second;
    const SiteSet region = region_ball(lat.origin(), r, lat);
    const SiteSet window = h.window(region).united(a.support());
    check_oracle_window(window);
    const EigenSystem eig = hermitian_eigensystem(h.assemble(s, region, window).matrix());
    const Matrix a_eig = eig.vectors.adjoint() * embed(a, window).matrix() * eig.vectors;
    const Matrix tau = eig.vectors * heisenberg_rotate(eig, a_eig, t) * eig.vectors.adjoint();
    return cache.emplace(r, DenseOperator(window, tau)).first->second;
  };
  DecayCurve curve;
  curve.label = "alpha";
  for (int alpha : alphas) {
    if (alpha < 1) throw std::invalid_argument("boundary differences need alpha >= 1");
    if (!curve.x.empty() && alpha <= curve.x.back()) throw std::invalid_argument("alphas must be increasing");
    double value = 0.0;
    if (std::min(alpha, covering_radius(lat)) != std::min(alpha - 1, covering_radius(lat))) {
      value = hermitian_norm(difference(evolved(alpha), evolved(alpha - 1)).matrix());
    }
    curve.x.push_back(alpha);
    curve.value.push_back(value);
  }
  return curve;
}

}  // namespace adiacont
