#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adiacont/filter.hpp"
#include "adiacont/hamiltonian.hpp"
#include "adiacont/linalg.hpp"
#include "adiacont/operators.hpp"

namespace adiacont {

/// F_s needs a full eigendecomposition, so its windows are capped lower than
/// plain dense operators.
inline constexpr std::size_t kMaxSpectralSites = 13;

/// Filter map F(M) = \int chi(t) \int_0^t tau_u(M) du dt evaluated in the
/// eigenbasis of `h`: F(M)_{mn} = w(E_m - E_n) M_{mn}. `m` and `h` must live
/// on the same window.
DenseOperator apply_filter_map(const DenseOperator& m, const DenseOperator& h, const BumpFilter& filter);
DenseOperator apply_filter_map(const DenseOperator& m, const EigenSystem& eig, const BumpFilter& filter);

/// F^{H_region(s)}(h'_j) on window(region) ∪ supp(h'_j).
DenseOperator filtered_driving_term(const ParamHamiltonian& h, double s, const SiteSet& region,
                                    const Site& j, const BumpFilter& filter);

/// K(s) = F^{H(s)}(H') on the whole lattice (no truncation).
DenseOperator full_generator(const ParamHamiltonian& h, double s, const BumpFilter& filter);

/// ball() with the radius clamped to the covering radius, where it already
/// contains every site.
SiteSet region_ball(const Site& center, int radius, const Lattice& lat);

struct QuasiLocalTerm {
  Site center;
  int alpha = 0;
  double s = 0.0;
  DenseOperator op;
};

/// k_{j,alpha}(s) = F^{H_{Λα(j)}}(h'_j) - F^{H_{Λα-1(j)}}(h'_j), and
/// k_{j,0}(s) = F^{H_{Λ0(j)}}(h'_j).
QuasiLocalTerm shell_term(const ParamHamiltonian& h, double s, const Site& center, int alpha,
                          const BumpFilter& filter);

struct PowerLawFit {
  bool valid = false;
  double prefactor = 0.0;
  double exponent = 0.0;
  double x_min = 0.0;
};

/// Measured norms against an increasing abscissa (alpha, beta, distance or t).
struct DecayCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> value;
  PowerLawFit envelope;
  /// Emitted as `# key=value` header comments in CSV output.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Least-squares fit of log(value) = log(prefactor) + exponent log(x) over
  /// points with x >= x_min and value > 0.
  void fit_envelope(double x_min);
  [[nodiscard]] double envelope_at(double x) const;
};

/// CSV with columns `x,value,envelope_fit`.
std::string to_csv(const DecayCurve& curve);

/// Points (alpha, ||k_{j,alpha}(s)||) for alpha = 0..alpha_max.
DecayCurve shell_decay_curve(const ParamHamiltonian& h, double s, const Site& center, int alpha_max,
                             const BumpFilter& filter);

struct TruncatedGenerator {
  int alpha = 0;
  int beta = 0;
  double s = 0.0;
  DenseOperator op;
};

/// Window of K~_{α,β}: union over j in Λα(center) of window(Λβ(j)) ∪ supp(h'_j).
SiteSet generator_window(const ParamHamiltonian& h, const Site& center, int alpha, int beta);

/// K~_{α,β}(s) = sum_{j in Λα(center)} F^{H_{Λβ(j)}(s)}(h'_j), summed in
/// ascending site order. Translation-generated Hamiltonians compute the
/// origin term once and relabel it.
TruncatedGenerator assemble_truncated_generator(const ParamHamiltonian& h, double s, int alpha, int beta,
                                                const BumpFilter& filter, const Site& center);

struct SummabilityReport {
  int l = 0;
  int alpha_max = 0;
  std::vector<double> shell_norms;
  std::vector<double> partial_sums;
  double sum = 0.0;
  /// |S(alpha_max) - S(alpha_max / 2)| / S(alpha_max)
  double relative_change = 0.0;
  bool converged = false;
  /// Smallest c with ||k_alpha|| <= c / alpha^(l-1) for alpha >= 1 (report only).
  double c_l = 0.0;
};

/// sum_alpha ||k_alpha|| (1 + 2 alpha (alpha + 1))^2 (2 + 2 alpha)^eta, with a
/// convergence flag set when halving alpha_max changes the sum by < 1%.
SummabilityReport summability_check(const ParamHamiltonian& h, double s, const BumpFilter& filter, int l,
                                    int alpha_max);
SummabilityReport summability_from_norms(std::vector<double> shell_norms, int dimension, int l);

}  // namespace adiacont
