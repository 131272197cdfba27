#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace adiacont {

/// Parameters of the smooth spectral filter.
///
/// The frequency-domain bump chi_hat is 1 on [-gamma/3, gamma/3], 0 outside
/// (-gamma, gamma), and on each transition band equals one minus a normalized
/// integral of the mollifier exp(-1/(1-x^2)).
///
/// Fourier convention: chi_hat(w) = \int chi(t) e^{iwt} dt, so
/// chi(t) = (1/2pi) \int chi_hat(w) e^{-iwt} dw and \int chi = chi_hat(0) = 1.
struct FilterSpec {
  double gamma = 0.5;
  /// Gauss-Legendre nodes for the mollifier integral.
  int mollifier_nodes = 128;
  /// Composite Gauss-Legendre panels over [-gamma, gamma] for chi(t); a
  /// multiple of 3 so that panel edges fall on the band boundaries.
  int frequency_panels = 96;
  /// Gauss-Legendre nodes per panel, shared by the frequency and time rules.
  int nodes_per_panel = 16;
  /// Time integrals are truncated to |t| <= t_max_factor / gamma.
  double t_max_factor = 400.0;

  /// Throws ConfigError on non-positive gamma or quadrature sizes.
  void validate() const;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// The bump filter and the spectral weight derived from it. Immutable and
/// safe to share between threads.
class BumpFilter {
 public:
  explicit BumpFilter(FilterSpec spec);

  [[nodiscard]] const FilterSpec& spec() const { return spec_; }
  [[nodiscard]] double gamma() const { return spec_.gamma; }

  /// chi_hat(w); exactly 1 on the plateau and exactly 0 for |w| >= gamma.
  [[nodiscard]] double chi_hat(double omega) const;

  /// max over a dense grid of |d^j chi_hat / dw^j|, by central differences.
  /// j = 0 returns max chi_hat = 1. Requires 0 <= j <= 6.
  [[nodiscard]] double chi_hat_derivative_bound(int j) const;

  /// chi(t) by quadrature of the inverse transform. Throws NumericalFailure if
  /// doubling the frequency panels moves the value by more than 1e-10 or if
  /// the imaginary part exceeds 1e-12.
  [[nodiscard]] double chi_time(double t) const;

  /// chi(t) from the base rule only, no certificate. For bulk tabulation.
  [[nodiscard]] double chi_time_fast(double t) const;

  /// Frequency kernel of the filter map: w(w) = (chi_hat(w) - 1) / (i w),
  /// w(0) = 0. Purely imaginary and odd; equals i / w for |w| >= gamma.
  [[nodiscard]] std::complex<double> spectral_weight(double omega) const;

  /// Imaginary parts Im w(E_m - E_n) for all pairs of `energies`.
  [[nodiscard]] Eigen::MatrixXd spectral_weight_matrix(const Eigen::VectorXd& energies) const;

  /// Smooth step S on [-1, 1]: S(-1) = 0, S(1) = 1, S(x) + S(-x) = 1.
  [[nodiscard]] double smooth_step(double x) const;

 private:
  struct FrequencyRule {
    std::vector<double> omega;   // positive half, omega > 0
    std::vector<double> coeff;   // weight * chi_hat / (2 pi), per node
  };
  FrequencyRule frequency_rule(int panels) const;
  static double chi_from_rule(const FrequencyRule& rule, double t);

  FilterSpec spec_;
  GaussLegendre mollifier_;
  double half_mass_ = 0.0;
  FrequencyRule base_rule_;
  FrequencyRule fine_rule_;
};

/// Truncated composite Gauss-Legendre rule on [-T, T] with chi(t) tabulated.
/// Panels are narrow enough to resolve oscillations up to `max_frequency`.
struct TimeQuadrature {
  std::vector<double> t;
  std::vector<double> weight;  // plain quadrature weights
  std::vector<double> chi;     // chi(t) at the nodes
};

/// `refinement` multiplies the panel count (2 for the node-doubling check).
TimeQuadrature make_time_quadrature(const BumpFilter& filter, double max_frequency, int refinement = 1);

}  // namespace adiacont
