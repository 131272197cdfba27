#include "adiacont/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adiacont/errors.hpp"
#include "adiacont/linalg.hpp"

namespace adiacont {

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
  }
}

namespace {

// sigma_a sigma_b = phase * sigma_c
std::pair<Complex, Pauli> multiply_single(Pauli a, Pauli b) {
  if (a == Pauli::I) return {1.0, b};
  if (b == Pauli::I) return {1.0, a};
  if (a == b) return {1.0, Pauli::I};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  const int ic = 6 - ia - ib;
  // cyclic (X,Y), (Y,Z), (Z,X) give +i
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? Complex(0, 1) : Complex(0, -1), static_cast<Pauli>(ic)};
}

}  // namespace

PauliString::PauliString(std::vector<std::pair<Site, Pauli>> factors) : factors_(std::move(factors)) {
  std::erase_if(factors_, [](const auto& f) { return f.second == Pauli::I; });
  std::sort(factors_.begin(), factors_.end());
  for (std::size_t i = 1; i < factors_.size(); ++i) {
    if (factors_[i].first == factors_[i - 1].first) {
      throw std::invalid_argument("Pauli string has two factors on site " + to_string(factors_[i].first));
    }
  }
}

SiteSet PauliString::support() const {
  std::vector<Site> s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(f.first);
  return SiteSet(std::move(s));
}

std::pair<Complex, PauliString> multiply(const PauliString& a, const PauliString& b) {
  Complex phase = 1.0;
  std::vector<std::pair<Site, Pauli>> out;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    if (j == fb.size() || (i < fa.size() && fa[i].first < fb[j].first)) {
      out.push_back(fa[i++]);
    } else if (i == fa.size() || fb[j].first < fa[i].first) {
      out.push_back(fb[j++]);
    } else {
      auto [p, c] = multiply_single(fa[i].second, fb[j].second);
      phase *= p;
      if (c != Pauli::I) out.emplace_back(fa[i].first, c);
      ++i;
      ++j;
    }
  }
  return {phase, PauliString(std::move(out))};
}

LocalOperator LocalOperator::identity(Complex coeff) { return string(PauliString{}, coeff); }

LocalOperator LocalOperator::pauli(const Site& site, Pauli p, Complex coeff) {
  return string(PauliString({{site, p}}), coeff);
}

LocalOperator LocalOperator::string(const PauliString& s, Complex coeff) {
  LocalOperator op;
  op.add_term(s, coeff);
  return op;
}

void LocalOperator::add_term(const PauliString& s, Complex c) {
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    if (std::abs(c) > kCoefficientCutoff) terms_.emplace(s, c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) <= kCoefficientCutoff) terms_.erase(it);
}

SiteSet LocalOperator::support() const {
  SiteSet out;
  for (const auto& [s, c] : terms_) {
    if (std::abs(c) > kCoefficientCutoff) out = out.united(s.support());
  }
  return out;
}

bool LocalOperator::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& t) { return std::abs(t.second.imag()) <= tol; });
}

LocalOperator LocalOperator::adjoint() const {
  LocalOperator out;
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
  return out;
}

LocalOperator& LocalOperator::operator+=(const LocalOperator& rhs) {
  for (const auto& [s, c] : rhs.terms_) add_term(s, c);
  return *this;
}

LocalOperator& LocalOperator::operator-=(const LocalOperator& rhs) {
  for (const auto& [s, c] : rhs.terms_) add_term(s, -c);
  return *this;
}

LocalOperator& LocalOperator::operator*=(Complex scale) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= scale;
    if (std::abs(it->second) <= kCoefficientCutoff) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

LocalOperator operator*(const LocalOperator& a, const LocalOperator& b) {
  LocalOperator out;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      auto [phase, s] = multiply(sa, sb);
      out.add_term(s, phase * ca * cb);
    }
  }
  return out;
}

LocalOperator pauli_translate(const LocalOperator& op, const Site& shift, const Lattice& lat) {
  LocalOperator out;
  for (const auto& [s, c] : op.terms()) {
    std::vector<std::pair<Site, Pauli>> moved;
    moved.reserve(s.factors().size());
    for (const auto& [site, p] : s.factors()) moved.emplace_back(lat.add(site, shift), p);
    out += LocalOperator::string(PauliString(std::move(moved)), c);
  }
  return out;
}

std::string to_text(const LocalOperator& op, const Lattice& lat) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [s, c] : op.terms()) {
    out << c.real() << ' ' << c.imag();
    for (const auto& [site, p] : s.factors()) out << ' ' << lat.index(site) << ':' << to_char(p);
    out << '\n';
  }
  return out.str();
}

LocalOperator parse_local_operator(const std::string& text, const Lattice& lat) {
  LocalOperator out;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    double re = 0.0, im = 0.0;
    if (!(tokens >> re)) continue;  // blank line
    if (!(tokens >> im)) {
      throw ConfigError("operator line " + std::to_string(lineno) + ": expected `re im site:axis ...`");
    }
    LocalOperator term = LocalOperator::identity(Complex(re, im));
    std::string factor;
    while (tokens >> factor) {
      const auto colon = factor.find(':');
      if (colon == std::string::npos || colon + 2 != factor.size()) {
        throw ConfigError("operator line " + std::to_string(lineno) + ": bad factor '" + factor + "'");
      }
      int index = 0;
      try {
        index = std::stoi(factor.substr(0, colon));
      } catch (const std::exception&) {
        throw ConfigError("operator line " + std::to_string(lineno) + ": bad site in '" + factor + "'");
      }
      if (index < 0 || index >= lat.num_sites()) {
        throw ConfigError("operator line " + std::to_string(lineno) + ": site index out of range");
      }
      Pauli p;
      try {
        p = pauli_from_char(factor[colon + 1]);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("operator line " + std::to_string(lineno) + ": " + e.what());
      }
      term = term * LocalOperator::pauli(lat.site(index), p);
    }
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(SiteSet window, Eigen::MatrixXcd matrix)
    : window_(std::move(window)), matrix_(std::move(matrix)) {
  check_dense_window(window_);
  const Eigen::Index dim = Eigen::Index{1} << window_.size();
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("dense operator on " + std::to_string(window_.size()) +
                                " sites must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
}

DenseOperator DenseOperator::identity(const SiteSet& window) {
  check_dense_window(window);
  const Eigen::Index dim = Eigen::Index{1} << window.size();
  return DenseOperator(window, Eigen::MatrixXcd::Identity(dim, dim));
}

DenseOperator DenseOperator::zero(const SiteSet& window) {
  check_dense_window(window);
  const Eigen::Index dim = Eigen::Index{1} << window.size();
  return DenseOperator(window, Eigen::MatrixXcd::Zero(dim, dim));
}

void check_dense_window(const SiteSet& window, std::size_t cap) {
  if (window.size() > cap) {
    throw WindowCapExceeded("window of " + std::to_string(window.size()) +
                            " sites exceeds the dense cap of " + std::to_string(cap));
  }
}

namespace {

// Basis-index contribution of each local configuration of `sub` inside `full`.
std::vector<Eigen::Index> deposit_table(const SiteSet& sub, const SiteSet& full) {
  const std::size_t k = sub.size();
  const std::size_t n = full.size();
  std::vector<int> bit(k);
  for (std::size_t p = 0; p < k; ++p) {
    bit[p] = static_cast<int>(n - 1 - full.position(sub[p]));
  }
  std::vector<Eigen::Index> table(std::size_t{1} << k, 0);
  for (std::size_t local = 0; local < table.size(); ++local) {
    Eigen::Index idx = 0;
    for (std::size_t p = 0; p < k; ++p) {
      if ((local >> (k - 1 - p)) & 1U) idx |= Eigen::Index{1} << bit[p];
    }
    table[local] = idx;
  }
  return table;
}

}  // namespace

DenseOperator DenseOperator::extended_to(const SiteSet& larger) const {
  if (larger == window_) return *this;
  if (!larger.includes(window_)) {
    throw std::invalid_argument("cannot extend operator on " + to_string(window_) + " to " +
                                to_string(larger));
  }
  check_dense_window(larger);
  const auto inner = deposit_table(window_, larger);
  const auto outer = deposit_table(larger.minus(window_), larger);
  const Eigen::Index dim = Eigen::Index{1} << larger.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::Index small = matrix_.rows();
  for (Eigen::Index c = 0; c < small; ++c) {
    for (Eigen::Index r = 0; r < small; ++r) {
      const Complex v = matrix_(r, c);
      if (v == Complex(0.0)) continue;
      const Eigen::Index rr = inner[static_cast<std::size_t>(r)];
      const Eigen::Index cc = inner[static_cast<std::size_t>(c)];
      for (const Eigen::Index o : outer) out(rr | o, cc | o) = v;
    }
  }
  return DenseOperator(larger, std::move(out));
}

DenseOperator DenseOperator::dagger() const { return DenseOperator(window_, matrix_.adjoint()); }

bool DenseOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& rhs) {
  if (rhs.window_ == window_) {
    matrix_ += rhs.matrix_;
  } else {
    const SiteSet u = window_.united(rhs.window_);
    *this = extended_to(u);
    matrix_ += rhs.extended_to(u).matrix_;
  }
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& rhs) {
  if (rhs.window_ == window_) {
    matrix_ -= rhs.matrix_;
  } else {
    const SiteSet u = window_.united(rhs.window_);
    *this = extended_to(u);
    matrix_ -= rhs.extended_to(u).matrix_;
  }
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

DenseOperator embed(const LocalOperator& op, const SiteSet& window) {
  const SiteSet supp = op.support();
  if (!window.includes(supp)) {
    throw std::invalid_argument("support " + to_string(supp) + " is not contained in window " +
                                to_string(window));
  }
  check_dense_window(window);
  const std::size_t n = window.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : op.terms()) {
    std::uint64_t flip = 0, sign = 0;
    int ys = 0;
    for (const auto& [site, p] : s.factors()) {
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - window.position(site));
      if (p == Pauli::X || p == Pauli::Y) flip |= bit;
      if (p == Pauli::Y || p == Pauli::Z) sign |= bit;
      if (p == Pauli::Y) ++ys;
    }
    static const Complex kIPow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
    const Complex base = c * kIPow[ys % 4];
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto b = static_cast<std::uint64_t>(col);
      const bool odd = std::popcount(b & sign) % 2 == 1;
      m(static_cast<Eigen::Index>(b ^ flip), col) += odd ? -base : base;
    }
  }
  return DenseOperator(window, std::move(m));
}

double op_norm(const DenseOperator& op) { return spectral_norm(op.matrix()); }

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b, WindowPolicy policy) {
  if (a.window() == b.window()) return DenseOperator(a.window(), a.matrix() * b.matrix());
  if (policy == WindowPolicy::kStrict) {
    throw std::invalid_argument("window mismatch: " + to_string(a.window()) + " vs " + to_string(b.window()));
  }
  const SiteSet u = a.window().united(b.window());
  return DenseOperator(u, a.extended_to(u).matrix() * b.extended_to(u).matrix());
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b, WindowPolicy policy) {
  if (a.window() != b.window() && policy == WindowPolicy::kStrict) {
    throw std::invalid_argument("window mismatch: " + to_string(a.window()) + " vs " + to_string(b.window()));
  }
  const SiteSet u = a.window().united(b.window());
  const Eigen::MatrixXcd ma = a.extended_to(u).matrix();
  const Eigen::MatrixXcd mb = b.extended_to(u).matrix();
  return DenseOperator(u, ma * mb - mb * ma);
}

DenseOperator difference(const DenseOperator& a, const DenseOperator& b) { return a - b; }

DenseOperator translate(const DenseOperator& op, const Site& shift, const Lattice& lat) {
  const SiteSet& from = op.window();
  const SiteSet to = translate(from, shift, lat);
  const std::size_t n = from.size();
  // Old leg p moves to new leg position_of(site_p + shift).
  std::vector<int> new_bit(n);
  for (std::size_t p = 0; p < n; ++p) {
    new_bit[p] = static_cast<int>(n - 1 - to.position(lat.add(from[p], shift)));
  }
  const Eigen::Index dim = op.dim();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index moved = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if ((idx >> (n - 1 - p)) & 1) moved |= Eigen::Index{1} << new_bit[p];
    }
    perm[static_cast<std::size_t>(idx)] = moved;
  }
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      m(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]) = op.matrix()(r, c);
    }
  }
  return DenseOperator(to, std::move(m));
}

}  // namespace adiacont
