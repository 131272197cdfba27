#include "adiacont/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace adiacont {

std::string to_string(const Site& site) {
  std::ostringstream out;
  out << '(' << site.coords[0] << ',' << site.coords[1] << ')';
  return out.str();
}

SiteSet::SiteSet(std::initializer_list<Site> sites) : SiteSet(std::vector<Site>(sites)) {}

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

bool SiteSet::contains(const Site& site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool SiteSet::includes(const SiteSet& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
}

std::size_t SiteSet::position(const Site& site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) {
    throw std::invalid_argument("site " + to_string(site) + " not in set " + adiacont::to_string(*this));
  }
  return static_cast<std::size_t>(it - sites_.begin());
}

SiteSet SiteSet::united(const SiteSet& other) const {
  std::vector<Site> out;
  out.reserve(sites_.size() + other.sites_.size());
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  SiteSet result;
  result.sites_ = std::move(out);
  return result;
}

SiteSet SiteSet::minus(const SiteSet& other) const {
  std::vector<Site> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out));
  SiteSet result;
  result.sites_ = std::move(out);
  return result;
}

std::string to_string(const SiteSet& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : set) {
    if (!first) out += ' ';
    out += to_string(s);
    first = false;
  }
  return out + "}";
}

Lattice::Lattice(int dimension, int extent) : dimension_(dimension), extent_(extent) {
  if (dimension != 1 && dimension != 2) {
    throw std::invalid_argument("lattice dimension must be 1 or 2");
  }
  if (extent < 1) throw std::invalid_argument("lattice extent must be positive");
  num_sites_ = dimension == 1 ? extent : extent * extent;
}

Site Lattice::canonical(std::array<int, 2> coords) const {
  Site out;
  for (int axis = 0; axis < dimension_; ++axis) {
    int c = coords[axis] % extent_;
    out.coords[axis] = c < 0 ? c + extent_ : c;
  }
  return out;
}

Site Lattice::unit(int axis) const {
  if (axis < 0 || axis >= dimension_) throw std::invalid_argument("axis out of range");
  std::array<int, 2> c{0, 0};
  c[axis] = 1;
  return canonical(c);
}

bool Lattice::is_canonical(const Site& site) const {
  for (int axis = 0; axis < 2; ++axis) {
    const int c = site.coords[axis];
    if (axis < dimension_) {
      if (c < 0 || c >= extent_) return false;
    } else if (c != 0) {
      return false;
    }
  }
  return true;
}

void Lattice::check(const Site& site) const {
  if (!is_canonical(site)) {
    throw std::invalid_argument("site " + to_string(site) + " does not belong to a lattice with dim=" +
                                std::to_string(dimension_) + ", m=" + std::to_string(extent_));
  }
}

int Lattice::index(const Site& site) const {
  check(site);
  return dimension_ == 1 ? site.coords[0] : site.coords[0] * extent_ + site.coords[1];
}

Site Lattice::site(int index) const {
  if (index < 0 || index >= num_sites_) throw std::invalid_argument("site index out of range");
  if (dimension_ == 1) return Site{{index, 0}};
  return Site{{index / extent_, index % extent_}};
}

SiteSet Lattice::all_sites() const {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(num_sites_));
  for (int i = 0; i < num_sites_; ++i) out.push_back(site(i));
  return SiteSet(std::move(out));
}

Site Lattice::add(const Site& a, const Site& b) const {
  return canonical({a.coords[0] + b.coords[0], a.coords[1] + b.coords[1]});
}

Site Lattice::negate(const Site& a) const { return canonical({-a.coords[0], -a.coords[1]}); }

int distance(const Site& a, const Site& b, const Lattice& lat) {
  lat.check(a);
  lat.check(b);
  int d = 0;
  for (int axis = 0; axis < lat.dimension(); ++axis) {
    const int delta = std::abs(a.coords[axis] - b.coords[axis]);
    d += std::min(delta, lat.extent() - delta);
  }
  return d;
}

SiteSet ball(const Site& center, int radius, const Lattice& lat) {
  lat.check(center);
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  if (radius >= lat.extent()) {
    throw std::invalid_argument("ball radius " + std::to_string(radius) + " must be below the extent " +
                                std::to_string(lat.extent()));
  }
  std::vector<Site> out;
  for (int i = 0; i < lat.num_sites(); ++i) {
    Site s = lat.site(i);
    if (distance(center, s, lat) <= radius) out.push_back(s);
  }
  return SiteSet(std::move(out));
}

SiteSet sumset(const SiteSet& lhs, const SiteSet& rhs, const Lattice& lat) {
  std::vector<Site> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& x : lhs) {
    lat.check(x);
    for (const auto& y : rhs) {
      lat.check(y);
      out.push_back(lat.add(x, y));
    }
  }
  return SiteSet(std::move(out));
}

SiteSet translate(const SiteSet& set, const Site& shift, const Lattice& lat) {
  lat.check(shift);
  std::vector<Site> out;
  out.reserve(set.size());
  for (const auto& x : set) {
    lat.check(x);
    out.push_back(lat.add(x, shift));
  }
  return SiteSet(std::move(out));
}

int covering_radius(const Lattice& lat) { return lat.dimension() * (lat.extent() / 2); }

}  // namespace adiacont
