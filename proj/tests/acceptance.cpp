#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "adiacont/errors.hpp"
#include "adiacont/filter.hpp"
#include "adiacont/hamiltonian.hpp"
#include "adiacont/heisenberg.hpp"
#include "adiacont/oracle.hpp"
#include "adiacont/quasiadiabatic.hpp"
#include "adiacont/runner.hpp"

using namespace adiacont;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kMachine = 1e-15;
constexpr double kEnvelopeSlack = 1.05;
constexpr double kProjectorSpectral = 1e-10;
constexpr double kProjectorQuadrature = 1e-6;
constexpr double kNegativeControl = 1e-3;
constexpr double kPerturbation = 1e-9;
constexpr double kTransport = 1e-4;
constexpr double kTransportRatio = 4.0;
constexpr double kRefinementRatioLow = 3.5;
constexpr double kRefinementRatioHigh = 4.5;
constexpr double kTailExponent = -3.0;
constexpr double kTelescoping = 1e-9;
constexpr double kSummability = 0.01;
constexpr double kExpectation = 0.01;
constexpr double kFullWindowOde = 1e-6;
constexpr double kConeZero = 1e-12;
constexpr double kConeCap = 2.0;
constexpr double kConeRms = 0.5;
constexpr double kFixture = 1e-9;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(3);
  out << x;
  return out.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

ParamHamiltonian chain(int m, double lambda = 0.2) { return perturbed_classical(Lattice(1, m), lambda); }

double min_gap(const ParamHamiltonian& h) { return gap_scan(h, linspace(0.0, 1.0, 21)).min_gap; }

BumpFilter filter_with(double gamma) {
  FilterSpec spec;
  spec.gamma = gamma;
  return BumpFilter(spec);
}

Site site1(int x) { return Site{{x, 0}}; }

Outcome filter_construction() {
  double plateau = 0.0, outside = 0.0;
  bool ok = true;
  for (double gamma : {0.5, 1.0, 2.0}) {
    const BumpFilter f = filter_with(gamma);
    ok = ok && f.chi_hat(0.0) == 1.0;
    for (double w : linspace(-1.5 * gamma, 1.5 * gamma, 3001)) {
      if (std::abs(w) <= gamma / 3.0) plateau = std::max(plateau, std::abs(f.chi_hat(w) - 1.0));
      if (std::abs(w) >= gamma) outside = std::max(outside, std::abs(f.chi_hat(w)));
    }
  }
  ok = ok && plateau <= kMachine && outside <= kMachine;

  const BumpFilter unit = filter_with(1.0);
  const std::vector<double> fit_grid = linspace(5.0, 50.0, 226);
  std::vector<double> c(6, 0.0);
  for (double t : fit_grid) {
    const double x = std::abs(unit.chi_time(t));
    for (int j = 2; j <= 5; ++j) c[j] = std::max(c[j], kEnvelopeSlack * x * std::pow(t, j));
  }
  double worst = 0.0;
  for (double gamma : {0.5, 2.0}) {
    const BumpFilter f = filter_with(gamma);
    for (double u : linspace(5.0, 50.0, 173)) {
      const double t = u / gamma;
      const double x = std::abs(f.chi_time(t));
      for (int j = 2; j <= 5; ++j) worst = std::max(worst, x / (c[j] * std::pow(gamma, 1 - j) * std::pow(t, -j)));
    }
  }
  ok = ok && worst <= 1.0;
  return {ok, "plateau dev " + fmt(plateau) + ", outside " + fmt(outside) + ", worst bound ratio " + fmt(worst) +
                  " (C2..C5 = " + fmt(c[2]) + ", " + fmt(c[3]) + ", " + fmt(c[4]) + ", " + fmt(c[5]) + ")"};
}

Outcome projector_reconstruction() {
  const Lattice single(1, 1);
  const ParamHamiltonian spin(single, make_interaction(LocalOperator::pauli(single.origin(), Pauli::Z, -1.0),
                                                       LocalOperator::pauli(single.origin(), Pauli::X, 0.2), single));
  double spectral = 0.0, quadrature = 0.0, control = 1.0;
  bool ok = true;
  for (const ParamHamiltonian& h : {spin, chain(2), chain(6)}) {
    const BumpFilter f = filter_with(0.5 * min_gap(h));
    for (double s : {0.0, 0.5, 1.0}) {
      const ProjectorCheck r = projector_filter_check(h.assemble(s), f);
      ok = ok && !r.warning;
      spectral = std::max(spectral, r.spectral_residual);
      quadrature = std::max(quadrature, r.quadrature_residual);
    }
    const DenseOperator h1 = h.assemble(1.0);
    const double gap = ground_state(h1, false).gap;
    const ProjectorCheck bad = projector_filter_check(h1, filter_with(1.5 * gap), false);
    control = std::min(control, bad.spectral_residual);
  }
  ok = ok && spectral <= kProjectorSpectral && quadrature <= kProjectorQuadrature && control >= kNegativeControl;
  return {ok, "spectral " + fmt(spectral) + ", quadrature " + fmt(quadrature) + ", negative control " + fmt(control)};
}

Outcome perturbation_identity() {
  const ParamHamiltonian h = chain(8);
  const BumpFilter f = filter_with(0.5 * min_gap(h));
  double worst = 0.0;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, pt_generator_check(h, s, f));
  return {worst <= kPerturbation, "max residual " + fmt(worst)};
}

Outcome unitary_transport() {
  const ParamHamiltonian h = chain(8);
  const BumpFilter f = filter_with(0.5 * min_gap(h));
  EvolutionConfig cfg;
  cfg.ds = 1e-3;
  cfg.check_convergence = false;
  const TransportReport fine = unitary_transport_check(h, f, cfg);
  cfg.ds = 0.25;
  const TransportReport c1 = unitary_transport_check(h, f, cfg);
  cfg.ds = 0.125;
  const TransportReport c2 = unitary_transport_check(h, f, cfg);
  const double ratio = c1.max_error / c2.max_error;
  const bool ok = fine.max_error <= kTransport && ratio >= kTransportRatio;
  return {ok, "error at ds=1e-3 " + fmt(fine.max_error) + ", halving ratio (ds 0.25 to 0.125) " + fmt(ratio)};
}

Outcome exact_generator() {
  const ParamHamiltonian h = chain(6);
  const TransportReport fine = exact_adiabatic_generator_check(h, 1e-3);
  const TransportReport coarse = exact_adiabatic_generator_check(h, 2e-3);
  const double ratio = coarse.max_error / fine.max_error;
  const bool ok = fine.max_error <= kTransport && ratio >= kRefinementRatioLow && ratio <= kRefinementRatioHigh;
  return {ok, "error at ds=1e-3 " + fmt(fine.max_error) + ", refinement ratio " + fmt(ratio)};
}

Outcome shell_decay() {
  const ParamHamiltonian h = chain(10);
  const BumpFilter f = filter_with(0.5 * min_gap(h));
  DecayCurve curve = shell_decay_curve(h, 1.0, h.lattice().origin(), covering_radius(h.lattice()), f);
  std::size_t onset = curve.value.size() - 1;
  while (onset > 0 && curve.value[onset - 1] > curve.value[onset]) --onset;
  const bool monotone_tail = curve.value.size() - onset >= 3;
  curve.fit_envelope(std::max(1.0, curve.x[onset]));
  const double exponent = curve.envelope.valid ? curve.envelope.exponent : 0.0;

  const ParamHamiltonian small = chain(6);
  const BumpFilter fs = filter_with(0.5 * min_gap(small));
  const SiteSet all = small.lattice().all_sites();
  DenseOperator sum = DenseOperator::zero(all);
  for (int a = 0; a <= covering_radius(small.lattice()); ++a) {
    sum += shell_term(small, 1.0, small.lattice().origin(), a, fs).op.extended_to(all);
  }
  const double telescoping =
      op_norm(sum - apply_filter_map(embed(small.driving_term(small.lattice().origin()), all), small.assemble(1.0), fs));
  const bool ok = monotone_tail && exponent <= kTailExponent && telescoping <= kTelescoping;
  std::string norms;
  for (double v : curve.value) norms += (norms.empty() ? "" : " ") + fmt(v);
  return {ok, "onset alpha*=" + fmt(curve.x[onset]) + ", tail exponent " + fmt(exponent) + ", telescoping " +
                  fmt(telescoping) + ", norms [" + norms + "]"};
}

Outcome summability() {
  const ParamHamiltonian h = chain(8);
  const BumpFilter f = filter_with(0.5 * min_gap(h));
  const SummabilityReport r = summability_check(h, 1.0, f, 8, covering_radius(h.lattice()));
  return {r.relative_change <= kSummability,
          "relative change under alpha_max doubling " + fmt(r.relative_change) + " (alpha_max " +
              std::to_string(r.alpha_max) + ", sum " + fmt(r.sum) + ")"};
}

Outcome truncated_evolution() {
  const ParamHamiltonian h = chain(8);
  const BumpFilter f = filter_with(0.5 * min_gap(h));
  const Site center = site1(4);
  const LocalOperator a = LocalOperator::pauli(center, Pauli::Z);
  EvolutionConfig cfg;
  cfg.center = center;
  cfg.s_grid = linspace(0.0, 1.0, 21);
  cfg.alpha = 3;
  cfg.beta = 3;
  const std::vector<double> exact = exact_expectations(h, cfg.s_grid, a);

  const ExpectationReport r = expectation(h, evolve_propagator(h, cfg, f), a);
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(r.omega_approx[i] - exact[i]));

  EvolutionConfig curve_cfg = cfg;
  curve_cfg.check_convergence = false;
  const DecayCurve curve = truncation_error_curve(h, curve_cfg, f, a, 1.0, TruncationAxis::kAlpha, {0, 1, 2, 3, 4}, 4, 3);
  const std::size_t n = curve.value.size();
  const bool decreasing = curve.value[n - 3] > curve.value[n - 2] && curve.value[n - 2] > curve.value[n - 1];

  const Trajectory full = evolve_full_propagator(h, cfg, f);
  const ExpectationReport rf = expectation(h, full, a);
  double full_worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) full_worst = std::max(full_worst, std::abs(rf.omega_approx[i] - exact[i]));
  const double full_limit = 1e-6 + kFullWindowOde;

  const bool ok = worst <= kExpectation && decreasing && full_worst <= full_limit;
  std::string values;
  for (double v : curve.value) values += (values.empty() ? "" : " ") + fmt(v);
  return {ok, "max error at alpha=beta=3 " + fmt(worst) + ", alpha curve [" + values + "], full window " +
                  fmt(full_worst) + " (halving " + fmt(full.halving_difference) + ")"};
}

Outcome lieb_robinson() {
  const ParamHamiltonian h = chain(10);
  const std::vector<double> t_grid{0.0, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  const ConeReport r = lr_cone_scan(h, 1.0, Pauli::Z, Pauli::Z, {1, 2, 3, 4, 5}, t_grid);
  double at_zero = 0.0, largest = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    for (double v : r.values[i]) {
      largest = std::max(largest, v);
      if (r.t[i] == 0.0) at_zero = std::max(at_zero, v);
    }
  }
  const double t = 1.0;
  const int radius = r.cone_radius(t);
  const DecayCurve bd =
      boundary_difference_scan(h, 1.0, LocalOperator::pauli(h.lattice().origin(), Pauli::Z), {1, 2, 3, 4, 5}, t);
  bool decreasing = true;
  for (std::size_t i = 1; i < bd.x.size(); ++i) {
    if (bd.x[i - 1] >= radius && bd.value[i] > bd.value[i - 1]) decreasing = false;
  }
  const bool ok = at_zero <= kConeZero && largest <= kConeCap + 1e-12 && r.fit.valid &&
                  r.fit.rms_residual <= kConeRms && decreasing;
  return {ok, "t=0 max " + fmt(at_zero) + ", max " + fmt(largest) + ", v " + fmt(r.fit.velocity) + ", kappa " +
                  fmt(r.fit.rate) + ", rms " + fmt(r.fit.rms_residual) + ", cone radius at t=1 " +
                  std::to_string(radius) + ", boundary differences decreasing " + (decreasing ? "yes" : "no")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path configs = ADIACONT_CONFIGS;
  const fs::path work = fs::temp_directory_path() / "adiacont_acceptance";
  fs::remove_all(work);
  int runs = 0, identical = 0, fixtures = 0, stable = 0;
  double worst = 0.0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() == ".cfg" && entry.path().stem().string().rfind("bad", 0) != 0) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string experiment = path.stem().string();
    RunConfig a = load_config(path.string());
    RunConfig b = a;
    a.output_dir = (work / (experiment + "_a")).string();
    b.output_dir = (work / (experiment + "_b")).string();
    const RunResult ra = run_experiment(experiment, a);
    const RunResult rb = run_experiment(experiment, b, {ADIACONT_FIXTURES, false});
    ++runs;
    bool same = ra.files.size() == rb.files.size();
    for (std::size_t i = 0; same && i < ra.files.size(); ++i) {
      if (fs::path(ra.files[i]).extension() == ".csv") same = slurp(ra.files[i]) == slurp(rb.files[i]);
    }
    identical += same ? 1 : 0;
    for (const auto& as : rb.assertions) {
      if (as.name.rfind("fixture ", 0) != 0) continue;
      ++fixtures;
      stable += as.value <= kFixture ? 1 : 0;
      worst = std::max(worst, as.value);
    }
  }
  fs::remove_all(work);
  const bool ok = runs > 0 && identical == runs && fixtures > 0 && stable == fixtures;
  return {ok, std::to_string(identical) + "/" + std::to_string(runs) + " experiments bit-identical, " +
                  std::to_string(stable) + "/" + std::to_string(fixtures) + " fixtures within 1e-9 (worst " +
                  fmt(worst) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "filter construction", 10, filter_construction},
      {2, "projector reconstruction", 30, projector_reconstruction},
      {3, "perturbation-theory identity", 120, perturbation_identity},
      {4, "unitary transport at zero truncation", 600, unitary_transport},
      {5, "exact adiabatic generator", 300, exact_generator},
      {6, "shell decay", 600, shell_decay},
      {7, "summability", 300, summability},
      {8, "truncated-evolution accuracy", 900, truncated_evolution},
      {9, "Lieb-Robinson structure", 600, lieb_robinson},
      {10, "determinism and fixtures", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool passed = out.passed && in_time;
    failures += passed ? 0 : 1;
    std::cout << "criterion " << c.id << " " << (passed ? "PASS" : "FAIL") << " " << c.title << ": " << out.detail
              << "; " << fmt(seconds) << " s of " << c.budget_seconds << " s" << (in_time ? "" : " (over budget)")
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
