#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace adiacont {

/// A lattice site. Coordinates beyond the lattice dimension are zero.
struct Site {
  std::array<int, 2> coords{0, 0};

  auto operator<=>(const Site&) const = default;
};

std::string to_string(const Site& site);

/// Ordered, duplicate-free set of sites.
///
/// Iteration follows the global site order (row-major on canonical
/// coordinates). That order also fixes the tensor-leg order of every dense
/// operator built on a window, with the first site as the most significant
/// bit of a basis index.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<Site> sites);
  explicit SiteSet(std::vector<Site> sites);

  [[nodiscard]] std::size_t size() const { return sites_.size(); }
  [[nodiscard]] bool empty() const { return sites_.empty(); }
  [[nodiscard]] auto begin() const { return sites_.begin(); }
  [[nodiscard]] auto end() const { return sites_.end(); }
  [[nodiscard]] const Site& operator[](std::size_t i) const { return sites_[i]; }
  [[nodiscard]] const std::vector<Site>& sites() const { return sites_; }

  [[nodiscard]] bool contains(const Site& site) const;
  [[nodiscard]] bool includes(const SiteSet& other) const;
  /// Position of `site` in iteration order; throws if absent.
  [[nodiscard]] std::size_t position(const Site& site) const;

  [[nodiscard]] SiteSet united(const SiteSet& other) const;
  [[nodiscard]] SiteSet minus(const SiteSet& other) const;

  bool operator==(const SiteSet&) const = default;

 private:
  std::vector<Site> sites_;
};

std::string to_string(const SiteSet& set);

/// Periodic hypercubic lattice of dimension 1 or 2 with `extent` sites per
/// axis. Immutable.
class Lattice {
 public:
  Lattice(int dimension, int extent);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] int extent() const { return extent_; }
  [[nodiscard]] int num_sites() const { return num_sites_; }

  /// Reduces arbitrary integer coordinates mod m on every active axis.
  [[nodiscard]] Site canonical(std::array<int, 2> coords) const;
  [[nodiscard]] Site origin() const { return Site{}; }
  /// Unit vector along `axis` (0 = x, 1 = y).
  [[nodiscard]] Site unit(int axis) const;

  /// Throws std::invalid_argument unless `site` is canonical for this lattice.
  void check(const Site& site) const;
  [[nodiscard]] bool is_canonical(const Site& site) const;

  /// Row-major index in [0, n).
  [[nodiscard]] int index(const Site& site) const;
  [[nodiscard]] Site site(int index) const;
  [[nodiscard]] SiteSet all_sites() const;

  [[nodiscard]] Site add(const Site& a, const Site& b) const;
  [[nodiscard]] Site negate(const Site& a) const;

  bool operator==(const Lattice&) const = default;

 private:
  int dimension_;
  int extent_;
  int num_sites_;
};

/// Wrap-around l1 graph distance.
int distance(const Site& a, const Site& b, const Lattice& lat);

/// Sites within graph distance `radius` of `center`. Requires radius < m.
SiteSet ball(const Site& center, int radius, const Lattice& lat);

/// {x + y mod m : x in lhs, y in rhs}.
SiteSet sumset(const SiteSet& lhs, const SiteSet& rhs, const Lattice& lat);

SiteSet translate(const SiteSet& set, const Site& shift, const Lattice& lat);

/// Smallest radius r with ball(center, r) covering every site.
int covering_radius(const Lattice& lat);

}  // namespace adiacont
