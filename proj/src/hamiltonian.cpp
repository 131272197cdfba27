#include "adiacont/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "adiacont/errors.hpp"
#include "adiacont/linalg.hpp"

namespace adiacont {

Interaction make_interaction(LocalOperator h0, LocalOperator hprime, const Lattice& lat) {
  if (!h0.is_hermitian() || !hprime.is_hermitian()) {
    throw std::invalid_argument("interaction terms must be Hermitian");
  }
  Interaction out{std::move(h0), std::move(hprime), 0.0, 0.0};
  const SiteSet supp = out.support();
  for (const auto& s : supp) lat.check(s);
  if (!supp.contains(lat.origin())) {
    throw std::invalid_argument("the interaction must act on the origin");
  }
  out.h0_norm = op_norm(embed(out.h0, supp));
  out.hprime_norm = op_norm(embed(out.hprime, supp));
  return out;
}

ParamHamiltonian::ParamHamiltonian(Lattice lattice, Interaction interaction,
                                   std::map<Site, Interaction> overrides)
    : lattice_(lattice), interaction_(std::move(interaction)), overrides_(std::move(overrides)) {
  for (const auto& [site, inter] : overrides_) {
    lattice_.check(site);
    if (!inter.h0.is_hermitian() || !inter.hprime.is_hermitian()) {
      throw std::invalid_argument("override interaction at " + to_string(site) + " is not Hermitian");
    }
  }
}

LocalOperator ParamHamiltonian::term(const Site& j, double s) const {
  return static_term(j) + s * driving_term(j);
}

LocalOperator ParamHamiltonian::static_term(const Site& j) const {
  if (auto it = overrides_.find(j); it != overrides_.end()) return it->second.h0;
  return pauli_translate(interaction_.h0, j, lattice_);
}

LocalOperator ParamHamiltonian::driving_term(const Site& j) const {
  if (auto it = overrides_.find(j); it != overrides_.end()) return it->second.hprime;
  return pauli_translate(interaction_.hprime, j, lattice_);
}

SiteSet ParamHamiltonian::term_support(const Site& j) const {
  if (auto it = overrides_.find(j); it != overrides_.end()) return it->second.support();
  return translate(interaction_.support(), j, lattice_);
}

SiteSet ParamHamiltonian::window(const SiteSet& region) const {
  SiteSet out;
  for (const auto& j : region) out = out.united(term_support(j));
  return out;
}

LocalOperator ParamHamiltonian::restricted(const SiteSet& region, double s) const {
  LocalOperator out;
  for (const auto& j : region) out += term(j, s);
  return out;
}

LocalOperator ParamHamiltonian::restricted_driving(const SiteSet& region) const {
  LocalOperator out;
  for (const auto& j : region) out += driving_term(j);
  return out;
}

DenseOperator ParamHamiltonian::assemble(double s, const SiteSet& region) const {
  return assemble(s, region, window(region));
}

DenseOperator ParamHamiltonian::assemble(double s, const SiteSet& region, const SiteSet& window) const {
  return embed(restricted(region, s), window);
}

DenseOperator ParamHamiltonian::assemble(double s) const {
  const SiteSet all = lattice_.all_sites();
  return assemble(s, all, all);
}

double ParamHamiltonian::max_term_norm(double s) const {
  if (translation_generated()) return op_norm(embed(interaction_.at(s), interaction_.support()));
  double best = 0.0;
  for (const auto& j : lattice_.all_sites()) {
    best = std::max(best, op_norm(embed(term(j, s), term_support(j))));
  }
  return best;
}

ParamHamiltonian perturbed_classical(const Lattice& lat, double lambda) {
  const Site o = lat.origin();
  LocalOperator h0 = LocalOperator::pauli(o, Pauli::Z, -1.0);
  LocalOperator hprime;
  for (int axis = 0; axis < lat.dimension(); ++axis) {
    hprime += LocalOperator::pauli(o, Pauli::X, lambda) * LocalOperator::pauli(lat.unit(axis), Pauli::X);
  }
  return ParamHamiltonian(lat, make_interaction(std::move(h0), std::move(hprime), lat));
}

SpectrumReport ground_state(const DenseOperator& h, bool keep_vector, bool require_unique) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("ground_state requires a Hermitian operator");
  SpectrumReport out;
  if (keep_vector) {
    EigenSystem eig = hermitian_eigensystem(h.matrix());
    out.eigenvalues = std::move(eig.values);
    out.ground_vector = eig.vectors.col(0);
  } else {
    out.eigenvalues = hermitian_eigenvalues(h.matrix());
  }
  out.ground_energy = out.eigenvalues(0);
  out.gap = out.eigenvalues.size() > 1 ? out.eigenvalues(1) - out.eigenvalues(0)
                                       : std::numeric_limits<double>::infinity();
  out.degenerate = out.gap < kDegeneracyThreshold;
  if (out.degenerate && require_unique) {
    throw AssumptionViolation("degenerate ground state (gap " + std::to_string(out.gap) + ")");
  }
  return out;
}

GapScanReport gap_scan(const ParamHamiltonian& h, std::span<const double> s_grid, double gap_bound) {
  if (s_grid.empty()) throw std::invalid_argument("gap_scan needs a nonempty grid");
  GapScanReport out;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (const double s : s_grid) {
    const SpectrumReport r = ground_state(h.assemble(s), false, false);
    out.s.push_back(s);
    out.gap.push_back(r.gap);
    out.ground_energy.push_back(r.ground_energy);
    if (r.gap < out.min_gap) {
      out.min_gap = r.gap;
      out.argmin_s = s;
    }
  }
  if (gap_bound > 0.0 && out.min_gap < gap_bound) {
    throw AssumptionViolation("minimum gap " + std::to_string(out.min_gap) + " at s=" +
                              std::to_string(out.argmin_s) + " is below the bound " +
                              std::to_string(gap_bound));
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParamHamiltonian parse_model(const std::string& text) {
  std::map<std::string, std::string> header;
  std::map<std::string, std::string> sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("model file: malformed section '" + t + "'");
      current = t.substr(1, t.size() - 2);
      if (current != "h0" && current != "hprime") throw ConfigError("model file: unknown section " + t);
      sections[current];
      continue;
    }
    if (!current.empty()) {
      sections[current] += t + "\n";
      continue;
    }
    std::istringstream fields(t);
    std::string field;
    while (std::getline(fields, field, ',')) {
      field = trim(field);
      if (field.empty()) continue;
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ConfigError("model file: expected key=value, got '" + field + "'");
      const std::string key = trim(field.substr(0, eq));
      if (key != "dim" && key != "m" && key != "lambda") throw ConfigError("model file: unknown key " + key);
      header[key] = trim(field.substr(eq + 1));
    }
  }
  if (!header.contains("dim") || !header.contains("m")) throw ConfigError("model file: dim and m are required");
  int dim = 0, m = 0;
  double lambda = 0.0;
  try {
    dim = std::stoi(header["dim"]);
    m = std::stoi(header["m"]);
    if (header.contains("lambda")) lambda = std::stod(header["lambda"]);
  } catch (const std::exception&) {
    throw ConfigError("model file: malformed numeric header value");
  }
  Lattice lat = [&] {
    try {
      return Lattice(dim, m);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("model file: ") + e.what());
    }
  }();
  if (sections.empty()) {
    if (!header.contains("lambda")) throw ConfigError("model file: lambda required without operator sections");
    return perturbed_classical(lat, lambda);
  }
  if (!sections.contains("h0") || !sections.contains("hprime")) {
    throw ConfigError("model file: both [h0] and [hprime] sections are required");
  }
  try {
    return ParamHamiltonian(lat, make_interaction(parse_local_operator(sections["h0"], lat),
                                                  parse_local_operator(sections["hprime"], lat), lat));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model file: ") + e.what());
  }
}

std::string format_model(const ParamHamiltonian& h, std::optional<double> lambda) {
  std::ostringstream out;
  out.precision(17);
  out << "dim=" << h.lattice().dimension() << ", m=" << h.lattice().extent();
  if (lambda) out << ", lambda=" << *lambda;
  out << "\n[h0]\n" << to_text(h.interaction().h0, h.lattice());
  out << "[hprime]\n" << to_text(h.interaction().hprime, h.lattice());
  return out.str();
}

}  // namespace adiacont
