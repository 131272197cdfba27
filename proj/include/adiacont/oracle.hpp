#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adiacont/filter.hpp"
#include "adiacont/hamiltonian.hpp"
#include "adiacont/heisenberg.hpp"
#include "adiacont/operators.hpp"
#include "adiacont/quasiadiabatic.hpp"

namespace adiacont {

/// Exact diagonalization is limited to this many sites.
inline constexpr std::size_t kMaxOracleSites = 12;

struct ExactPath {
  SiteSet window;
  std::vector<double> s;
  std::vector<double> ground_energy;
  std::vector<double> gap;
  std::vector<Eigen::VectorXcd> ground;  // normalized, arbitrary phase

  [[nodiscard]] DenseOperator projector(std::size_t i) const;
};

ExactPath exact_path(const ParamHamiltonian& h, const std::vector<double>& s_grid);

/// <Omega(s)| A |Omega(s)> on the whole lattice.
double exact_expectation(const ParamHamiltonian& h, double s, const LocalOperator& a);
std::vector<double> exact_expectations(const ParamHamiltonian& h, const std::vector<double>& s_grid,
                                       const LocalOperator& a);

struct ProjectorCheck {
  double gap = 0.0;
  double gamma = 0.0;
  /// ||sum_k chi_hat(E_k - Omega) |k><k| - P||.
  double spectral_residual = 0.0;
  /// max_{k>0} |chi_hat(E_k - Omega)|, which the spectral residual equals.
  double leakage = 0.0;
  /// Same operator with chi_hat replaced by the truncated time integral.
  double quadrature_residual = 0.0;
  double path_agreement = 0.0;
  /// Set when gamma >= gap, where the reconstruction is not expected to hold.
  bool warning = false;
};

ProjectorCheck projector_filter_check(const DenseOperator& h, const BumpFilter& filter, bool with_quadrature = true);

/// ||i K(s)|Omega> - (Omega - H)^+ H' |Omega>|| with the untruncated K(s).
double pt_generator_check(const ParamHamiltonian& h, double s, const BumpFilter& filter);

struct TransportReport {
  double ds = 0.0;
  std::vector<double> s;
  std::vector<double> error;  // ||psi psi^dagger - P(s)|| per grid point
  double max_error = 0.0;
};

/// Integrates d psi/ds = -[P, P'] psi from Omega(0) with an exponential
/// midpoint rule; P' by central differences around each midpoint.
TransportReport exact_adiabatic_generator_check(const ParamHamiltonian& h, double ds, double report_every = 0.05);

/// Transports Omega(0) with the full quasi-adiabatic propagator and compares
/// V P(0) V^dagger with P(s) on cfg.s_grid.
TransportReport unitary_transport_check(const ParamHamiltonian& h, const BumpFilter& filter,
                                        const EvolutionConfig& cfg);

struct ConeFit {
  bool valid = false;
  double intercept = 0.0;
  double velocity = 0.0;  // v
  double rate = 0.0;      // kappa
  double rms_residual = 0.0;
  int points = 0;
};

struct ConeReport {
  std::vector<double> t;
  std::vector<int> distance;
  /// values[i][k] = ||[tau_t[i](A), B_{distance[k]}]||
  std::vector<std::vector<double>> values;
  ConeFit fit;

  /// ceil(kappa t / v).
  [[nodiscard]] int cone_radius(double time) const;
};

/// Lower and upper bounds of the fit region.
inline constexpr double kConeFloor = 1e-10;
inline constexpr double kConeCeiling = 0.5;

/// A = sigma^a at the origin, B = sigma^b at distance d along the first axis.
ConeReport lr_cone_scan(const ParamHamiltonian& h, double s, Pauli a, Pauli b, const std::vector<int>& distances,
                        const std::vector<double>& t_grid);

/// Least squares log(value) = intercept - v d + kappa t over kConeFloor < value < kConeCeiling.
/// Throws AssumptionViolation when fewer than three points qualify.
ConeFit fit_cone(const ConeReport& report);

/// Columns `t,distance,comm_norm`.
std::string to_csv(const ConeReport& report);
/// Fit summary as JSON.
std::string fit_summary(const ConeReport& report);

/// ||tau_t^{H_{Λα}}(A) - tau_t^{H_{Λα-1}}(A)|| for alpha in `alphas` (each >= 1),
/// with A at the origin.
DecayCurve boundary_difference_scan(const ParamHamiltonian& h, double s, const LocalOperator& a,
                                    const std::vector<int>& alphas, double t);

}  // namespace adiacont
