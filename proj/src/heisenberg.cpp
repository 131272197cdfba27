#include "adiacont/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "adiacont/errors.hpp"
#include "adiacont/linalg.hpp"

namespace adiacont {

void EvolutionConfig::validate() const {
  if (alpha < 0 || beta < 0) throw ConfigError("evolution radii must be nonnegative");
  if (s_grid.size() < 2 || s_grid.front() != 0.0 || s_grid.back() != 1.0) {
    throw ConfigError("s grid must start at 0 and end at 1");
  }
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw ConfigError("s grid must be nondecreasing");
  if (!(ds > 0.0) || ds > 1.0) throw ConfigError("evolution step must lie in (0, 1]");
  if (!(unitarity_tolerance > 0.0) || repair_limit < unitarity_tolerance) {
    throw ConfigError("need 0 < unitarity tolerance <= repair limit");
  }
  if (!(convergence_tolerance > 0.0)) throw ConfigError("convergence tolerance must be positive");
}

namespace {

using Matrix = Eigen::MatrixXcd;
constexpr Complex kI(0.0, 1.0);

Matrix rk4_step(const Matrix& v, double h, const Matrix& k0, const Matrix& kmid, const Matrix& k1) {
  const Matrix d1 = kI * (k0 * v);
  const Matrix d2 = kI * (kmid * (v + (0.5 * h) * d1));
  const Matrix d3 = kI * (kmid * (v + (0.5 * h) * d2));
  const Matrix d4 = kI * (k1 * (v + h * d3));
  return v + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
}

// Frobenius norm bounds the operator norm from above, so the full eigensolve
// only runs when the cheap bound is inconclusive.
double guarded_defect(Matrix& v, const EvolutionConfig& cfg, int& repairs) {
  Matrix gram = v.adjoint() * v;
  gram.diagonal().array() -= 1.0;
  if (gram.norm() <= cfg.unitarity_tolerance) return gram.norm();
  const double defect = hermitian_norm(gram);
  if (defect <= cfg.unitarity_tolerance) return defect;
  if (defect > cfg.repair_limit) {
    std::ostringstream msg;
    msg << "propagator unitarity defect " << defect << " exceeds the repair limit " << cfg.repair_limit;
    throw NumericalFailure(msg.str());
  }
  v = polar_unitary(v);
  ++repairs;
  return unitarity_defect(v);
}

}  // namespace

Trajectory integrate_propagator(const GeneratorFn& generator, const SiteSet& window, const EvolutionConfig& cfg) {
  cfg.validate();
  const Eigen::Index dim = Eigen::Index{1} << window.size();
  Trajectory out;
  out.window = window;
  out.alpha = cfg.alpha;
  out.beta = cfg.beta;
  out.ds = cfg.ds;
  out.halving_difference = cfg.check_convergence ? 0.0 : std::numeric_limits<double>::quiet_NaN();

  auto evaluate = [&](double s) {
    Matrix k = generator(s);
    ++out.generator_evaluations;
    if (k.rows() != dim || k.cols() != dim) throw std::invalid_argument("generator does not match the window");
    return k;
  };

  Matrix coarse = Matrix::Identity(dim, dim);
  Matrix fine = coarse;
  int fine_repairs = 0;
  Matrix k_left = evaluate(0.0);
  out.states.push_back(PropagatorState{0.0, DenseOperator(window, coarse), 0.0});

  for (std::size_t g = 1; g < cfg.s_grid.size(); ++g) {
    const double a = cfg.s_grid[g - 1];
    const double b = cfg.s_grid[g];
    double defect = out.states.back().unitarity_defect;
    if (b > a) {
      const auto steps = static_cast<long>(std::ceil((b - a) / cfg.ds - 1e-9));
      const double h = (b - a) / static_cast<double>(steps);
      for (long i = 0; i < steps; ++i) {
        const double s = a + h * static_cast<double>(i);
        const double s_end = (i + 1 == steps) ? b : s + h;
        const Matrix k_mid = evaluate(s + 0.5 * h);
        const Matrix k_right = evaluate(s_end);
        if (cfg.check_convergence) {
          const Matrix k_q1 = evaluate(s + 0.25 * h);
          const Matrix k_q3 = evaluate(s + 0.75 * h);
          fine = rk4_step(fine, 0.5 * h, k_left, k_q1, k_mid);
          fine = rk4_step(fine, 0.5 * h, k_mid, k_q3, k_right);
          guarded_defect(fine, cfg, fine_repairs);
        }
        coarse = rk4_step(coarse, h, k_left, k_mid, k_right);
        defect = guarded_defect(coarse, cfg, out.repairs);
        k_left = k_right;
      }
    }
    if (cfg.check_convergence) {
      out.halving_difference = std::max(out.halving_difference, spectral_norm(coarse - fine));
      if (out.halving_difference > cfg.convergence_tolerance) {
        std::ostringstream msg;
        msg << "step halving moved the propagator by " << out.halving_difference << " at s = " << b
            << " (tolerance " << cfg.convergence_tolerance << ")";
        throw NumericalFailure(msg.str());
      }
    }
    out.states.push_back(PropagatorState{b, DenseOperator(window, coarse), std::max(defect, unitarity_defect(coarse))});
  }
  return out;
}

Trajectory evolve_propagator(const ParamHamiltonian& h, const EvolutionConfig& cfg, const BumpFilter& filter) {
  h.lattice().check(cfg.center);
  const SiteSet window = generator_window(h, cfg.center, cfg.alpha, cfg.beta);
  check_dense_window(window, kMaxSpectralSites);
  auto generator = [&](double s) {
    return assemble_truncated_generator(h, s, cfg.alpha, cfg.beta, filter, cfg.center).op.matrix();
  };
  Trajectory out = integrate_propagator(generator, window, cfg);
  out.gamma = filter.gamma();
  return out;
}

Trajectory evolve_full_propagator(const ParamHamiltonian& h, const EvolutionConfig& cfg, const BumpFilter& filter) {
  const SiteSet window = h.lattice().all_sites();
  check_dense_window(window, kMaxSpectralSites);
  auto generator = [&](double s) { return full_generator(h, s, filter).matrix(); };
  Trajectory out = integrate_propagator(generator, window, cfg);
  out.gamma = filter.gamma();
  out.alpha = out.beta = covering_radius(h.lattice());
  return out;
}

std::vector<DenseOperator> evolve_observable(const Trajectory& trajectory, const LocalOperator& a,
                                             std::size_t max_support) {
  const SiteSet supp = a.support();
  if (supp.size() > max_support) {
    throw std::invalid_argument("observable support " + std::to_string(supp.size()) + " exceeds the limit " +
                                std::to_string(max_support));
  }
  if (!trajectory.window.includes(supp)) {
    throw std::invalid_argument("observable support " + to_string(supp) + " is not inside the window " +
                                to_string(trajectory.window));
  }
  const Matrix am = embed(a, trajectory.window).matrix();
  std::vector<DenseOperator> out;
  out.reserve(trajectory.states.size());
  for (const auto& state : trajectory.states) {
    const Matrix& v = state.v.matrix();
    out.emplace_back(trajectory.window, v.adjoint() * am * v);
  }
  return out;
}

Eigen::VectorXcd product_state(const SiteSet& window, const Eigen::Vector2cd& site_state) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (std::size_t i = 0; i < window.size(); ++i) {
    Eigen::VectorXcd next(psi.size() * 2);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      next(2 * k) = psi(k) * site_state(0);
      next(2 * k + 1) = psi(k) * site_state(1);
    }
    psi = std::move(next);
  }
  return psi.normalized();
}

void check_initial_state(const ParamHamiltonian& h, const SiteSet& window, const Eigen::VectorXcd& state) {
  std::vector<Site> interior;
  for (const auto& j : h.lattice().all_sites()) {
    if (window.includes(h.term_support(j))) interior.push_back(j);
  }
  const Matrix h0 = h.assemble(0.0, SiteSet(interior), window).matrix();
  const Eigen::VectorXcd image = h0 * state;
  const Complex energy = state.dot(image) / state.squaredNorm();
  const double residual = (image - energy * state).norm() / state.norm();
  if (residual > 1e-8) {
    std::ostringstream msg;
    msg << "initial state is not an eigenstate of H(0) on the window (residual " << residual << ")";
    throw AssumptionViolation(msg.str());
  }
}

double ExpectationReport::abs_error(std::size_t i) const {
  if (!has_oracle()) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(omega_approx.at(i) - omega_oracle.at(i));
}

double ExpectationReport::max_abs_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < omega_approx.size(); ++i) worst = std::max(worst, abs_error(i));
  return worst;
}

ExpectationReport expectation(const ParamHamiltonian& h, const Trajectory& trajectory, const LocalOperator& a,
                              const Eigen::Vector2cd& site_state) {
  const Eigen::VectorXcd psi0 = product_state(trajectory.window, site_state);
  check_initial_state(h, trajectory.window, psi0);
  if (!trajectory.window.includes(a.support())) {
    throw std::invalid_argument("observable support is not inside the window");
  }
  const Matrix am = embed(a, trajectory.window).matrix();
  ExpectationReport out;
  out.alpha = trajectory.alpha;
  out.beta = trajectory.beta;
  out.gamma = trajectory.gamma;
  for (const auto& state : trajectory.states) {
    const Eigen::VectorXcd psi = state.v.matrix() * psi0;
    out.s.push_back(state.s);
    out.omega_approx.push_back(psi.dot(am * psi).real());
    out.unitarity_defect.push_back(state.unitarity_defect);
  }
  return out;
}

std::string to_csv(const ExpectationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "s,omega_approx,omega_oracle,abs_error,alpha,beta,gamma,unitarity_defect\n";
  for (std::size_t i = 0; i < report.s.size(); ++i) {
    out << report.s[i] << ',' << report.omega_approx[i] << ',';
    if (report.has_oracle()) out << report.omega_oracle[i] << ',' << report.abs_error(i);
    else out << ',';
    out << ',' << report.alpha << ',' << report.beta << ',' << report.gamma << ',' << report.unitarity_defect[i]
        << '\n';
  }
  return out.str();
}

DecayCurve truncation_error_curve(const ParamHamiltonian& h, const EvolutionConfig& base, const BumpFilter& filter,
                                  const LocalOperator& a, double s, TruncationAxis axis,
                                  const std::vector<int>& radii, int alpha_ref, int beta_ref) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("truncation error needs s in (0, 1]");
  EvolutionConfig cfg = base;
  cfg.s_grid.clear();
  for (double x : base.s_grid) {
    if (x < s) cfg.s_grid.push_back(x);
  }
  cfg.s_grid.push_back(s);
  if (s < 1.0) cfg.s_grid.push_back(1.0);
  const std::size_t at = std::find(cfg.s_grid.begin(), cfg.s_grid.end(), s) - cfg.s_grid.begin();

  auto observable_at = [&](int alpha, int beta) {
    cfg.alpha = alpha;
    cfg.beta = beta;
    return evolve_observable(evolve_propagator(h, cfg, filter), a, base.max_observable_support).at(at);
  };
  const DenseOperator reference = observable_at(alpha_ref, beta_ref);

  DecayCurve curve;
  curve.label = axis == TruncationAxis::kAlpha ? "alpha" : "beta";
  for (int r : radii) {
    if (!curve.x.empty() && r <= curve.x.back()) throw std::invalid_argument("radii must be increasing");
    const bool is_ref = axis == TruncationAxis::kAlpha ? r == alpha_ref : r == beta_ref;
    double value = 0.0;
    if (!is_ref) {
      const DenseOperator approx =
          axis == TruncationAxis::kAlpha ? observable_at(r, beta_ref) : observable_at(alpha_ref, r);
      value = hermitian_norm(difference(approx, reference).matrix());
    }
    curve.x.push_back(r);
    curve.value.push_back(value);
  }
  return curve;
}

}  // namespace adiacont
