#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adiacont/lattice.hpp"

namespace adiacont {

using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Coefficients with modulus below this are treated as cancelled.
inline constexpr double kCoefficientCutoff = 1e-14;

/// Dense realizations are refused beyond this many sites.
inline constexpr std::size_t kMaxDenseSites = 14;

/// A tensor product of non-identity Pauli factors, ordered by site.
/// The coefficient lives in LocalOperator.
class PauliString {
 public:
  PauliString() = default;
  /// Factors on the same site are not allowed here; use LocalOperator products.
  explicit PauliString(std::vector<std::pair<Site, Pauli>> factors);

  [[nodiscard]] const std::vector<std::pair<Site, Pauli>>& factors() const { return factors_; }
  [[nodiscard]] bool is_identity() const { return factors_.empty(); }
  [[nodiscard]] SiteSet support() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<std::pair<Site, Pauli>> factors_;
};

/// Product of two strings: returns the phase and the resulting string.
std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b);

/// Finite sum of weighted Pauli strings. Value type; all operations are pure.
class LocalOperator {
 public:
  LocalOperator() = default;

  static LocalOperator identity(Complex coeff = 1.0);
  static LocalOperator pauli(const Site& site, Pauli p, Complex coeff = 1.0);
  static LocalOperator string(const PauliString& s, Complex coeff = 1.0);

  [[nodiscard]] const std::map<PauliString, Complex>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  /// Union of string supports, ignoring cancelled coefficients.
  [[nodiscard]] SiteSet support() const;
  /// Pauli strings are Hermitian, so the sum is Hermitian iff all coefficients are real.
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
  [[nodiscard]] LocalOperator adjoint() const;

  LocalOperator& operator+=(const LocalOperator& rhs);
  LocalOperator& operator-=(const LocalOperator& rhs);
  LocalOperator& operator*=(Complex scale);

  friend LocalOperator operator+(LocalOperator a, const LocalOperator& b) { return a += b; }
  friend LocalOperator operator-(LocalOperator a, const LocalOperator& b) { return a -= b; }
  friend LocalOperator operator*(LocalOperator a, Complex c) { return a *= c; }
  friend LocalOperator operator*(Complex c, LocalOperator a) { return a *= c; }
  friend LocalOperator operator*(const LocalOperator& a, const LocalOperator& b);

  bool operator==(const LocalOperator&) const = default;

 private:
  void add_term(const PauliString& s, Complex c);

  std::map<PauliString, Complex> terms_;
};

/// Relabels every factor's site by +shift mod m.
LocalOperator pauli_translate(const LocalOperator& op, const Site& shift, const Lattice& lat);

/// One string per line: `coeff_re coeff_im site:axis site:axis ...`, where
/// `site` is the row-major lattice index and `axis` one of X/Y/Z.
std::string to_text(const LocalOperator& op, const Lattice& lat);
LocalOperator parse_local_operator(const std::string& text, const Lattice& lat);

/// Matrix of an operator on a window of sites, in the global site order.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(SiteSet window, Eigen::MatrixXcd matrix);

  static DenseOperator identity(const SiteSet& window);
  static DenseOperator zero(const SiteSet& window);

  [[nodiscard]] const SiteSet& window() const { return window_; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }
  [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }

  /// Tensor with the identity on `larger \ window`. Requires window ⊆ larger.
  [[nodiscard]] DenseOperator extended_to(const SiteSet& larger) const;
  [[nodiscard]] DenseOperator dagger() const;
  [[nodiscard]] bool is_hermitian(double tol = 1e-10) const;

  DenseOperator& operator+=(const DenseOperator& rhs);
  DenseOperator& operator-=(const DenseOperator& rhs);
  DenseOperator& operator*=(Complex scale);
  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex c) { return a *= c; }
  friend DenseOperator operator*(Complex c, DenseOperator a) { return a *= c; }

 private:
  SiteSet window_;
  Eigen::MatrixXcd matrix_;
};

/// Throws WindowCapExceeded when `window` exceeds kMaxDenseSites.
void check_dense_window(const SiteSet& window, std::size_t cap = kMaxDenseSites);

DenseOperator embed(const LocalOperator& op, const SiteSet& window);

/// Largest singular value, from the Hermitian eigenvalues of A^dagger A.
double op_norm(const DenseOperator& op);

enum class WindowPolicy { kAutoEmbed, kStrict };

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b,
                       WindowPolicy policy = WindowPolicy::kAutoEmbed);
DenseOperator commutator(const DenseOperator& a, const DenseOperator& b,
                         WindowPolicy policy = WindowPolicy::kAutoEmbed);
inline DenseOperator dagger(const DenseOperator& a) { return a.dagger(); }

/// a - b after embedding both into the union of their windows.
DenseOperator difference(const DenseOperator& a, const DenseOperator& b);

/// Relabels the legs of a dense operator by a lattice translation.
DenseOperator translate(const DenseOperator& op, const Site& shift, const Lattice& lat);

}  // namespace adiacont
