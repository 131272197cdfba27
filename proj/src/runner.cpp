#include "adiacont/runner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "adiacont/errors.hpp"
#include "adiacont/oracle.hpp"
#include "adiacont/quasiadiabatic.hpp"

namespace adiacont {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "gap-scan",     "filter-check", "projector-check", "pt-check",           "shell-decay",      "summability",
      "lr-cone",      "boundary-diff", "evolve-expectation", "truncation-error", "exact-transport"};
  return names;
}

bool RunResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

std::vector<double> uniform_grid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));
  return grid;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

// Shared state of one run: lazily resolved model quantities plus output.
class Session {
 public:
  Session(std::string experiment, const RunConfig& cfg, const FixtureOptions& fixtures)
      : cfg_(cfg), fixtures_(fixtures), model_(build_model(cfg)) {
    result_.experiment = std::move(experiment);
    fs::create_directories(cfg.output_dir);
  }

  const RunConfig& cfg() const { return cfg_; }
  const ParamHamiltonian& model() const { return model_; }
  const Lattice& lattice() const { return model_.lattice(); }
  RunResult& result() { return result_; }
  json& derived() { return derived_; }

  double gap_bound() {
    if (!gap_bound_) {
      if (cfg_.model.gap_bound) {
        gap_bound_ = *cfg_.model.gap_bound;
      } else {
        if (static_cast<std::size_t>(lattice().num_sites()) > kMaxOracleSites) {
          throw ConfigError("model.gap_bound must be set when the lattice is too large for a gap scan");
        }
        const auto grid = uniform_grid(cfg_.model.gap_points);
        gap_bound_ = gap_scan(model_, grid).min_gap;
      }
      derived_["gap_bound"] = *gap_bound_;
    }
    return *gap_bound_;
  }

  const BumpFilter& filter() {
    if (!filter_) {
      FilterSpec spec = cfg_.filter.spec;
      spec.gamma = cfg_.filter.gamma ? *cfg_.filter.gamma : 0.5 * gap_bound();
      filter_.emplace(spec);
      derived_["gamma"] = spec.gamma;
    }
    return *filter_;
  }

  LocalOperator observable() const { return build_observable(cfg_, lattice()); }

  void assert_le(const std::string& name, double value, double threshold) {
    result_.assertions.push_back({name, value, threshold, value <= threshold});
  }
  void assert_ge(const std::string& name, double value, double threshold) {
    result_.assertions.push_back({name, value, threshold, value >= threshold});
  }
  void assert_true(const std::string& name, bool ok) {
    result_.assertions.push_back({name, ok ? 1.0 : 0.0, 1.0, ok});
  }

  void write_csv(const std::string& name, const std::string& text, bool fixture = false) {
    const fs::path path = fs::path(cfg_.output_dir) / name;
    std::ofstream(path) << text;
    result_.files.push_back(path.string());
    if (!fixture || fixtures_.dir.empty()) return;
    const fs::path fixture_path = fs::path(fixtures_.dir) / result_.experiment / name;
    if (fixtures_.write) {
      fs::create_directories(fixture_path.parent_path());
      std::ofstream(fixture_path) << text;
      return;
    }
    const FixtureComparison cmp = compare_fixture(text, fixture_path.string(), cfg_.tolerance.fixture);
    assert_le("fixture " + name, cmp.max_difference, cfg_.tolerance.fixture);
    result_.assertions.back().passed = cmp.passed;
    for (const auto& line : cmp.worst) fixture_notes_.push_back(name + " " + line);
  }

  void write_manifest(double seconds) {
    json j;
    j["tool"] = "adiacont";
    j["version"] = kToolVersion;
    j["experiment"] = result_.experiment;
    j["config"] = cfg_.resolved;
    j["lattice"] = {{"dimension", lattice().dimension()}, {"extent", lattice().extent()},
                    {"sites", lattice().num_sites()}};
    j["derived"] = derived_;
    json list = json::array();
    for (const auto& a : result_.assertions) {
      list.push_back({{"name", a.name}, {"value", a.value}, {"threshold", a.threshold}, {"passed", a.passed}});
    }
    j["assertions"] = list;
    if (!fixture_notes_.empty()) j["fixture_mismatches"] = fixture_notes_;
    j["files"] = result_.files;
    j["passed"] = result_.passed();
    j["wall_time_seconds"] = seconds;
    std::ofstream(fs::path(cfg_.output_dir) / "manifest.json") << j.dump(2) << '\n';
  }

 private:
  const RunConfig& cfg_;
  FixtureOptions fixtures_;
  ParamHamiltonian model_;
  RunResult result_;
  json derived_ = json::object();
  std::optional<double> gap_bound_;
  std::optional<BumpFilter> filter_;
  std::vector<std::string> fixture_notes_;
};

void add_metadata(Session& session, DecayCurve& curve) {
  const RunConfig& cfg = session.cfg();
  curve.metadata.emplace_back("gamma", format_number(session.filter().gamma()));
  curve.metadata.emplace_back("lambda", cfg.resolved.at("model.lambda"));
  curve.metadata.emplace_back("n", std::to_string(session.lattice().num_sites()));
  curve.metadata.emplace_back("s", format_number(cfg.scan.s));
}

bool decreasing_tail(const std::vector<double>& values, std::size_t count) {
  if (values.size() < count) return false;
  for (std::size_t i = values.size() - count + 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

void gap_scan_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const auto grid = uniform_grid(cfg.model.gap_points);
  const GapScanReport r = gap_scan(session.model(), grid, cfg.model.gap_bound.value_or(0.0));
  std::ostringstream out;
  out.precision(17);
  out << "s,gap,ground_energy\n";
  for (std::size_t i = 0; i < r.s.size(); ++i) out << r.s[i] << ',' << r.gap[i] << ',' << r.ground_energy[i] << '\n';
  session.write_csv("gap_scan.csv", out.str(), true);
  session.derived()["min_gap"] = r.min_gap;
  session.derived()["argmin_s"] = r.argmin_s;
  session.assert_ge("min gap", r.min_gap, cfg.model.gap_bound.value_or(kDegeneracyThreshold));
}

void filter_check_experiment(Session& session) {
  const BumpFilter& filter = session.filter();
  const double g = filter.gamma();
  std::ostringstream hat;
  hat.precision(17);
  hat << "omega,chi_hat,weight_imag\n";
  double plateau_dev = 0.0;
  double outside_max = 0.0;
  const int samples = 600;
  for (int i = 0; i <= samples; ++i) {
    const double w = -1.5 * g + 3.0 * g * i / samples;
    const double c = filter.chi_hat(w);
    hat << w << ',' << c << ',' << filter.spectral_weight(w).imag() << '\n';
    if (std::abs(w) <= g / 3.0) plateau_dev = std::max(plateau_dev, std::abs(c - 1.0));
    if (std::abs(w) >= g) outside_max = std::max(outside_max, std::abs(c));
  }
  session.write_csv("filter_chi_hat.csv", hat.str(), true);
  session.assert_le("chi_hat(0) - 1", std::abs(filter.chi_hat(0.0) - 1.0), 0.0);
  session.assert_le("plateau deviation", plateau_dev, 0.0);
  session.assert_le("outside support", outside_max, 0.0);

  // Envelope constants C_j = max |chi(t)| |t|^j gamma^(j-1) on [5/gamma, 50/gamma],
  // compared with the same constants of the unit-width filter.
  FilterSpec unit_spec = filter.spec();
  unit_spec.gamma = 1.0;
  const BumpFilter unit(unit_spec);
  std::ostringstream tail;
  tail.precision(17);
  tail << "t,chi,c2,c3,c4,c5\n";
  std::array<double, 4> c{}, c_unit{};
  const int points = 90;
  for (int i = 0; i <= points; ++i) {
    const double u = 5.0 + 45.0 * i / points;
    const double t = u / g;
    const double chi = filter.chi_time(t);
    const double chi_unit = unit.chi_time(u);
    tail << t << ',' << chi;
    for (int j = 2; j <= 5; ++j) {
      const double cj = std::abs(chi) * std::pow(t, j) * std::pow(g, j - 1);
      c[j - 2] = std::max(c[j - 2], cj);
      c_unit[j - 2] = std::max(c_unit[j - 2], std::abs(chi_unit) * std::pow(u, j));
      tail << ',' << cj;
    }
    tail << '\n';
  }
  session.write_csv("filter_chi_time.csv", tail.str(), true);
  for (int j = 2; j <= 5; ++j) {
    session.derived()["C" + std::to_string(j)] = c[j - 2];
    session.assert_le("decay envelope j=" + std::to_string(j), c[j - 2], 1.05 * c_unit[j - 2]);
  }
}

void projector_check_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const ProjectorCheck r = projector_filter_check(session.model().assemble(cfg.scan.s), session.filter());
  std::ostringstream out;
  out.precision(17);
  out << "s,gap,gamma,spectral_residual,leakage,quadrature_residual,path_agreement,warning\n";
  out << cfg.scan.s << ',' << r.gap << ',' << r.gamma << ',' << r.spectral_residual << ',' << r.leakage << ','
      << r.quadrature_residual << ',' << r.path_agreement << ',' << (r.warning ? 1 : 0) << '\n';
  session.write_csv("projector_check.csv", out.str());
  session.assert_le("gamma below gap", r.gamma, r.gap);
  session.result().assertions.back().passed = !r.warning;
  session.assert_le("residual matches leakage", std::abs(r.spectral_residual - r.leakage), 1e-12);
  if (!r.warning) {
    session.assert_le("spectral residual", r.spectral_residual, cfg.tolerance.projector);
    session.assert_le("quadrature agreement", r.path_agreement, cfg.tolerance.quadrature);
  }
}

void pt_check_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  std::ostringstream out;
  out.precision(17);
  out << "s,residual\n";
  double worst = 0.0;
  for (double s : cfg.evolution.s_grid) {
    const double r = pt_generator_check(session.model(), s, session.filter());
    worst = std::max(worst, r);
    out << s << ',' << r << '\n';
  }
  session.write_csv("pt_check.csv", out.str());
  session.assert_le("max residual", worst, cfg.tolerance.pt);
}

void shell_decay_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  DecayCurve curve =
      shell_decay_curve(session.model(), cfg.scan.s, session.lattice().origin(), cfg.scan.alpha_max, session.filter());
  const double x_min = std::max(1, cfg.scan.alpha_max / 2);
  curve.fit_envelope(x_min);
  add_metadata(session, curve);
  session.write_csv("shell_decay.csv", to_csv(curve), true);
  session.derived()["tail_exponent"] = curve.envelope.exponent;
  session.assert_true("tail fit valid", curve.envelope.valid);
  session.assert_le("tail exponent", curve.envelope.exponent, -3.0);
}

void summability_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const SummabilityReport r =
      summability_check(session.model(), cfg.scan.s, session.filter(), cfg.scan.l, cfg.scan.alpha_max);
  std::ostringstream out;
  out.precision(17);
  out << "alpha,shell_norm,partial_sum\n";
  for (std::size_t a = 0; a < r.shell_norms.size(); ++a) {
    out << a << ',' << r.shell_norms[a] << ',' << r.partial_sums[a] << '\n';
  }
  session.write_csv("summability.csv", out.str(), true);
  session.derived()["sum"] = r.sum;
  session.derived()["c_l"] = r.c_l;
  session.assert_le("relative change", r.relative_change, cfg.tolerance.summability);
}

ConeReport cone_scan(Session& session) {
  const RunConfig& cfg = session.cfg();
  std::vector<int> distances;
  for (int d : cfg.scan.distances) {
    if (d >= 0 && d <= session.lattice().extent() / 2) distances.push_back(d);
  }
  const Pauli p = pauli_from_char(static_cast<char>(std::toupper(cfg.observable.axis)));
  return lr_cone_scan(session.model(), cfg.scan.s, p, p, distances, cfg.scan.t_grid);
}

void lr_cone_experiment(Session& session) {
  const ConeReport r = cone_scan(session);
  session.write_csv("lr_cone.csv", to_csv(r), true);
  std::ofstream(fs::path(session.cfg().output_dir) / "lr_cone_fit.json") << fit_summary(r) << '\n';
  session.result().files.push_back((fs::path(session.cfg().output_dir) / "lr_cone_fit.json").string());
  double at_zero = 0.0;
  double largest = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    for (std::size_t k = 0; k < r.distance.size(); ++k) {
      largest = std::max(largest, r.values[i][k]);
      if (r.t[i] == 0.0 && r.distance[k] >= 1) at_zero = std::max(at_zero, r.values[i][k]);
    }
  }
  session.derived()["velocity"] = r.fit.velocity;
  session.derived()["kappa"] = r.fit.rate;
  session.assert_le("commutator at t=0", at_zero, 1e-12);
  session.assert_le("commutator cap", largest, 2.0 + 1e-12);
  session.assert_le("fit rms residual", r.fit.rms_residual, session.cfg().tolerance.cone_rms);
}

void boundary_diff_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const LocalOperator a = session.observable();
  DecayCurve curve = boundary_difference_scan(session.model(), cfg.scan.s, a, cfg.scan.alphas, cfg.scan.t);
  curve.metadata.emplace_back("lambda", cfg.resolved.at("model.lambda"));
  curve.metadata.emplace_back("n", std::to_string(session.lattice().num_sites()));
  curve.metadata.emplace_back("s", format_number(cfg.scan.s));
  curve.metadata.emplace_back("t", format_number(cfg.scan.t));
  session.write_csv("boundary_diff.csv", to_csv(curve), true);
  const ConeReport cone = cone_scan(session);
  const int radius = cone.cone_radius(cfg.scan.t);
  session.derived()["cone_radius"] = radius;
  bool decreasing = true;
  for (std::size_t i = 1; i < curve.x.size(); ++i) {
    if (curve.x[i - 1] >= radius && curve.value[i] > curve.value[i - 1]) decreasing = false;
  }
  session.assert_true("decreasing beyond cone radius", decreasing);
}

void evolve_expectation_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const LocalOperator a = session.observable();
  const Trajectory traj = evolve_propagator(session.model(), cfg.evolution, session.filter());
  ExpectationReport report = expectation(session.model(), traj, a);
  if (cfg.oracle) report.omega_oracle = exact_expectations(session.model(), cfg.evolution.s_grid, a);
  session.write_csv("expectation.csv", to_csv(report), true);
  session.derived()["window"] = to_string(traj.window);
  session.derived()["halving_difference"] = traj.halving_difference;
  session.derived()["repairs"] = traj.repairs;
  double defect = 0.0;
  for (double d : report.unitarity_defect) defect = std::max(defect, d);
  session.assert_le("unitarity defect", defect, cfg.evolution.repair_limit);
  if (report.has_oracle()) session.assert_le("max expectation error", report.max_abs_error(), cfg.tolerance.expectation);
}

void truncation_error_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const LocalOperator a = session.observable();
  const bool along_alpha = cfg.scan.axis == "alpha";
  const int top = *std::max_element(cfg.scan.radii.begin(), cfg.scan.radii.end());
  const int alpha_ref = along_alpha ? top : cfg.evolution.alpha;
  const int beta_ref = along_alpha ? cfg.evolution.beta : top;
  DecayCurve curve = truncation_error_curve(session.model(), cfg.evolution, session.filter(), a, cfg.scan.s,
                                            along_alpha ? TruncationAxis::kAlpha : TruncationAxis::kBeta,
                                            cfg.scan.radii, alpha_ref, beta_ref);
  add_metadata(session, curve);
  curve.metadata.emplace_back("alpha_ref", std::to_string(alpha_ref));
  curve.metadata.emplace_back("beta_ref", std::to_string(beta_ref));
  session.write_csv("truncation_error.csv", to_csv(curve), true);
  session.assert_true("decreasing over the last three points", decreasing_tail(curve.value, 3));
  session.assert_le("final point", curve.value.back(), cfg.tolerance.expectation);
}

void exact_transport_experiment(Session& session) {
  const RunConfig& cfg = session.cfg();
  const double ds = cfg.scan.transport_ds;
  const TransportReport fine = exact_adiabatic_generator_check(session.model(), ds);
  const TransportReport coarse = exact_adiabatic_generator_check(session.model(), 2.0 * ds);
  std::ostringstream out;
  out.precision(17);
  out << "s,error,error_double_step\n";
  for (std::size_t i = 0; i < fine.s.size(); ++i) {
    out << fine.s[i] << ',' << fine.error[i] << ',';
    if (i < coarse.s.size() && std::abs(coarse.s[i] - fine.s[i]) < 1e-12) out << coarse.error[i];
    out << '\n';
  }
  session.write_csv("exact_transport.csv", out.str(), true);
  const double ratio = coarse.max_error / fine.max_error;
  session.derived()["refinement_ratio"] = ratio;
  session.assert_le("transport error", fine.max_error, cfg.tolerance.transport);
  session.assert_ge("refinement ratio", ratio, cfg.tolerance.refinement_ratio);
}

}  // namespace

RunResult run_experiment(const std::string& experiment, const RunConfig& cfg, const FixtureOptions& fixtures) {
  static const std::map<std::string, std::function<void(Session&)>> table = {
      {"gap-scan", gap_scan_experiment},
      {"filter-check", filter_check_experiment},
      {"projector-check", projector_check_experiment},
      {"pt-check", pt_check_experiment},
      {"shell-decay", shell_decay_experiment},
      {"summability", summability_experiment},
      {"lr-cone", lr_cone_experiment},
      {"boundary-diff", boundary_diff_experiment},
      {"evolve-expectation", evolve_expectation_experiment},
      {"truncation-error", truncation_error_experiment},
      {"exact-transport", exact_transport_experiment},
  };
  const auto it = table.find(experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  const auto start = std::chrono::steady_clock::now();
  Session session(experiment, cfg, fixtures);
  it->second(session);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  session.write_manifest(elapsed.count());
  return session.result();
}

FixtureComparison compare_csv(const std::string& current, const std::string& fixture, double tolerance,
                              std::size_t report) {
  auto table = [](const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(std::move(cells));
    }
    return rows;
  };
  auto number = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used == s.size()) return x;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };

  const auto a = table(current);
  const auto b = table(fixture);
  FixtureComparison out;
  out.passed = true;
  if (a.size() != b.size()) {
    out.passed = false;
    out.max_difference = std::numeric_limits<double>::infinity();
    out.worst.push_back("row count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    return out;
  }
  std::vector<std::pair<double, std::string>> diffs;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size()) {
      out.passed = false;
      out.max_difference = std::numeric_limits<double>::infinity();
      diffs.emplace_back(out.max_difference, "row " + std::to_string(r) + ": column count differs");
      continue;
    }
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      const auto x = number(a[r][c]);
      const auto y = number(b[r][c]);
      double d = 0.0;
      if (x && y) {
        d = (std::isnan(*x) && std::isnan(*y)) ? 0.0 : std::abs(*x - *y);
        if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
        ++out.compared;
      } else if (a[r][c] != b[r][c]) {
        d = std::numeric_limits<double>::infinity();
      }
      if (d > tolerance) {
        out.passed = false;
        diffs.emplace_back(d, std::to_string(r) + "," + std::to_string(c) + ": " + a[r][c] + " vs " + b[r][c]);
      }
      out.max_difference = std::max(out.max_difference, d);
    }
  }
  std::stable_sort(diffs.begin(), diffs.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t i = 0; i < std::min(report, diffs.size()); ++i) out.worst.push_back(diffs[i].second);
  return out;
}

FixtureComparison compare_fixture(const std::string& current, const std::string& fixture_path, double tolerance) {
  if (!fs::exists(fixture_path)) throw ConfigError("missing fixture " + fixture_path);
  return compare_csv(current, read_text(fixture_path), tolerance);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const AssumptionViolation*>(&e)) return 3;
  if (dynamic_cast<const NumericalFailure*>(&e)) return 4;
  if (dynamic_cast<const WindowCapExceeded*>(&e)) return 5;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  return 1;
}

}  // namespace adiacont
