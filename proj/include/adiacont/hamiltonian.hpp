#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adiacont/lattice.hpp"
#include "adiacont/operators.hpp"

namespace adiacont {

/// h(s) = h0 + s h' centred on the origin.
struct Interaction {
  LocalOperator h0;
  LocalOperator hprime;
  double h0_norm = 0.0;
  double hprime_norm = 0.0;

  [[nodiscard]] LocalOperator at(double s) const { return h0 + s * hprime; }
  [[nodiscard]] SiteSet support() const { return h0.support().united(hprime.support()); }
};

/// Validates Hermiticity and that the origin lies in the support, and
/// records the operator norms of both parts.
Interaction make_interaction(LocalOperator h0, LocalOperator hprime, const Lattice& lat);

/// H(s) = sum_j h_j(s) with h_j the translate of h by j, unless an override
/// interaction (already placed at site j) is given for that site.
class ParamHamiltonian {
 public:
  ParamHamiltonian(Lattice lattice, Interaction interaction,
                   std::map<Site, Interaction> overrides = {});

  [[nodiscard]] const Lattice& lattice() const { return lattice_; }
  [[nodiscard]] const Interaction& interaction() const { return interaction_; }
  [[nodiscard]] bool translation_generated() const { return overrides_.empty(); }

  [[nodiscard]] LocalOperator term(const Site& j, double s) const;
  [[nodiscard]] LocalOperator static_term(const Site& j) const;
  [[nodiscard]] LocalOperator driving_term(const Site& j) const;
  [[nodiscard]] SiteSet term_support(const Site& j) const;

  /// Union of the supports of h_j for j in `region`.
  [[nodiscard]] SiteSet window(const SiteSet& region) const;

  /// sum_{j in region} h_j(s) as a Pauli sum.
  [[nodiscard]] LocalOperator restricted(const SiteSet& region, double s) const;
  /// sum_{j in region} h'_j.
  [[nodiscard]] LocalOperator restricted_driving(const SiteSet& region) const;

  /// Dense H_region(s) on window(region), or on a given superset of it.
  [[nodiscard]] DenseOperator assemble(double s, const SiteSet& region) const;
  [[nodiscard]] DenseOperator assemble(double s, const SiteSet& region, const SiteSet& window) const;
  /// Dense H(s) on the whole lattice.
  [[nodiscard]] DenseOperator assemble(double s) const;

  /// Largest operator norm among the per-site interactions at s.
  [[nodiscard]] double max_term_norm(double s) const;

 private:
  Lattice lattice_;
  Interaction interaction_;
  std::map<Site, Interaction> overrides_;
};

/// -sum_j sigma^z_j + s * lambda * sum_j sum_e sigma^x_j sigma^x_{j+e}, e over
/// the lattice unit vectors. H(0) is classical with the all-up ground state.
ParamHamiltonian perturbed_classical(const Lattice& lat, double lambda);

/// Degeneracy threshold for the uniqueness of the ground state.
inline constexpr double kDegeneracyThreshold = 1e-8;

struct SpectrumReport {
  double s = 0.0;
  Eigen::VectorXd eigenvalues;
  double ground_energy = 0.0;
  double gap = 0.0;
  bool degenerate = false;
  Eigen::VectorXcd ground_vector;  // empty unless requested
};

/// Full spectrum of a Hermitian operator. Throws std::invalid_argument on a
/// non-Hermitian input and AssumptionViolation when `require_unique` and the
/// gap is below kDegeneracyThreshold.
SpectrumReport ground_state(const DenseOperator& h, bool keep_vector = true, bool require_unique = true);

struct GapScanReport {
  std::vector<double> s;
  std::vector<double> gap;
  std::vector<double> ground_energy;
  double min_gap = 0.0;
  double argmin_s = 0.0;
};

/// Spectral gap of the full H(s) along `s_grid`. Throws AssumptionViolation
/// if the minimum falls below `gap_bound` (pass 0 to skip the check).
GapScanReport gap_scan(const ParamHamiltonian& h, std::span<const double> s_grid, double gap_bound = 0.0);

/// Model file: a header line `dim=1, m=8, lambda=0.2` followed by optional
/// `[h0]` and `[hprime]` sections in the LocalOperator text format. Without
/// sections the perturbed classical model is built from lambda.
ParamHamiltonian parse_model(const std::string& text);
std::string format_model(const ParamHamiltonian& h, std::optional<double> lambda = std::nullopt);

}  // namespace adiacont
