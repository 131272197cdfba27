#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adiacont/filter.hpp"
#include "adiacont/hamiltonian.hpp"
#include "adiacont/operators.hpp"
#include "adiacont/quasiadiabatic.hpp"

namespace adiacont {

struct EvolutionConfig {
  int alpha = 2;
  int beta = 2;
  /// Reporting points; must start at 0, end at 1 and be nondecreasing.
  std::vector<double> s_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  /// Largest ODE step; each grid interval is split into equal steps.
  double ds = 0.05;
  /// Polar repair kicks in above this defect.
  double unitarity_tolerance = 1e-8;
  /// Defects above this abort the run.
  double repair_limit = 1e-6;
  /// Runs a half-step solution alongside and fails if the two end points
  /// differ by more than `convergence_tolerance`.
  bool check_convergence = true;
  double convergence_tolerance = 1e-6;
  /// Observables with larger support are rejected.
  std::size_t max_observable_support = 4;
  Site center;

  /// Throws ConfigError.
  void validate() const;
};

struct PropagatorState {
  double s = 0.0;
  DenseOperator v;
  double unitarity_defect = 0.0;
};

struct Trajectory {
  SiteSet window;
  int alpha = 0;
  int beta = 0;
  double gamma = 0.0;
  double ds = 0.0;
  std::vector<PropagatorState> states;  // one per s_grid point
  /// ||V_ds(s) - V_{ds/2}(s)|| maximized over the grid; NaN when unchecked.
  double halving_difference = 0.0;
  int repairs = 0;
  int generator_evaluations = 0;
};

/// Hermitian generator K(s) as a matrix on the trajectory window.
using GeneratorFn = std::function<Eigen::MatrixXcd(double)>;

/// Integrates dV/ds = i K(s) V from V(0) = 1 with classical RK4.
Trajectory integrate_propagator(const GeneratorFn& generator, const SiteSet& window, const EvolutionConfig& cfg);

/// Propagator of the truncated generator K~_{alpha,beta} around cfg.center.
Trajectory evolve_propagator(const ParamHamiltonian& h, const EvolutionConfig& cfg, const BumpFilter& filter);

/// Propagator of the untruncated generator on the whole lattice.
Trajectory evolve_full_propagator(const ParamHamiltonian& h, const EvolutionConfig& cfg, const BumpFilter& filter);

/// A~(s) = V(s)^dagger A V(s) at every grid point.
std::vector<DenseOperator> evolve_observable(const Trajectory& trajectory, const LocalOperator& a,
                                             std::size_t max_support = 4);

/// Product state with every site in `site_state`, on the given window.
Eigen::VectorXcd product_state(const SiteSet& window, const Eigen::Vector2cd& site_state);

/// Throws AssumptionViolation unless `state` is an eigenstate, within 1e-8,
/// of H(0) restricted to the terms supported inside `window`.
void check_initial_state(const ParamHamiltonian& h, const SiteSet& window, const Eigen::VectorXcd& state);

struct ExpectationReport {
  std::vector<double> s;
  std::vector<double> omega_approx;
  std::vector<double> omega_oracle;  // empty when no oracle was run
  std::vector<double> unitarity_defect;
  int alpha = 0;
  int beta = 0;
  double gamma = 0.0;

  [[nodiscard]] bool has_oracle() const { return !omega_oracle.empty(); }
  [[nodiscard]] double abs_error(std::size_t i) const;
  [[nodiscard]] double max_abs_error() const;
};

/// omega'_s(A) = <psi0| V^dagger A V |psi0> with psi0 the all-up (or given)
/// product state on the trajectory window.
ExpectationReport expectation(const ParamHamiltonian& h, const Trajectory& trajectory, const LocalOperator& a,
                              const Eigen::Vector2cd& site_state = Eigen::Vector2cd(1.0, 0.0));

/// Columns `s,omega_approx,omega_oracle,abs_error,alpha,beta,gamma,unitarity_defect`.
std::string to_csv(const ExpectationReport& report);

enum class TruncationAxis { kAlpha, kBeta };

/// ||A~_{x}(s) - A~_{ref}(s)|| for x along `axis`, the other radius held at
/// its reference value.
DecayCurve truncation_error_curve(const ParamHamiltonian& h, const EvolutionConfig& base, const BumpFilter& filter,
                                  const LocalOperator& a, double s, TruncationAxis axis,
                                  const std::vector<int>& radii, int alpha_ref, int beta_ref);

}  // namespace adiacont
