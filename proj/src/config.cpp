#include "adiacont/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "adiacont/errors.hpp"

namespace adiacont {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(to_int(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::optional<double> auto_or_double(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_double(key, v);
}

std::vector<double> to_s_grid(const std::string& key, const std::string& v) {
  if (v.rfind("uniform:", 0) == 0) {
    const int n = to_int(key, v.substr(8));
    if (n < 1) throw ConfigError(key + ": uniform grid needs at least one interval");
    std::vector<double> grid;
    for (int i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
    return grid;
  }
  return to_doubles(key, v);
}

struct Key {
  std::string name;
  std::string fallback;
  std::function<void(RunConfig&, const std::string&, const std::string&)> apply;
};

const std::vector<Key>& keys() {
  using K = const std::string&;
  static const std::vector<Key> table = {
      {"model.dim", "1", [](RunConfig& c, K k, K v) { c.model.dimension = to_int(k, v); }},
      {"model.m", "8", [](RunConfig& c, K k, K v) { c.model.extent = to_int(k, v); }},
      {"model.lambda", "0.2", [](RunConfig& c, K k, K v) { c.model.lambda = to_double(k, v); }},
      {"model.file", "", [](RunConfig& c, K, K v) { c.model.file = v; }},
      {"model.gap_bound", "auto", [](RunConfig& c, K k, K v) { c.model.gap_bound = auto_or_double(k, v); }},
      {"model.gap_points", "21", [](RunConfig& c, K k, K v) { c.model.gap_points = to_int(k, v); }},
      {"filter.gamma", "auto", [](RunConfig& c, K k, K v) { c.filter.gamma = auto_or_double(k, v); }},
      {"filter.mollifier_nodes", "128",
       [](RunConfig& c, K k, K v) { c.filter.spec.mollifier_nodes = to_int(k, v); }},
      {"filter.frequency_panels", "96",
       [](RunConfig& c, K k, K v) { c.filter.spec.frequency_panels = to_int(k, v); }},
      {"filter.nodes_per_panel", "16",
       [](RunConfig& c, K k, K v) { c.filter.spec.nodes_per_panel = to_int(k, v); }},
      {"filter.t_max_factor", "400", [](RunConfig& c, K k, K v) { c.filter.spec.t_max_factor = to_double(k, v); }},
      {"evolution.alpha", "2", [](RunConfig& c, K k, K v) { c.evolution.alpha = to_int(k, v); }},
      {"evolution.beta", "same", [](RunConfig& c, K k, K v) {
         c.evolution.beta = v == "same" ? c.evolution.alpha : to_int(k, v);
       }},
      {"evolution.ds", "0.05", [](RunConfig& c, K k, K v) { c.evolution.ds = to_double(k, v); }},
      {"evolution.s_grid", "uniform:20", [](RunConfig& c, K k, K v) { c.evolution.s_grid = to_s_grid(k, v); }},
      {"evolution.unitarity_tolerance", "1e-8",
       [](RunConfig& c, K k, K v) { c.evolution.unitarity_tolerance = to_double(k, v); }},
      {"evolution.repair_limit", "1e-6", [](RunConfig& c, K k, K v) { c.evolution.repair_limit = to_double(k, v); }},
      {"evolution.check_convergence", "true",
       [](RunConfig& c, K k, K v) { c.evolution.check_convergence = to_bool(k, v); }},
      {"evolution.convergence_tolerance", "1e-6",
       [](RunConfig& c, K k, K v) { c.evolution.convergence_tolerance = to_double(k, v); }},
      {"evolution.max_observable_support", "4", [](RunConfig& c, K k, K v) {
         const int n = to_int(k, v);
         if (n < 1) throw ConfigError(k + ": must be positive");
         c.evolution.max_observable_support = static_cast<std::size_t>(n);
       }},
      {"evolution.center", "0", [](RunConfig& c, K k, K v) {
         const auto xs = to_ints(k, v);
         if (xs.size() > 2) throw ConfigError(k + ": at most two coordinates");
         c.evolution.center = Site{{xs[0], xs.size() > 1 ? xs[1] : 0}};
       }},
      {"observable.site", "0", [](RunConfig& c, K k, K v) { c.observable.site = to_ints(k, v); }},
      {"observable.axis", "z", [](RunConfig& c, K k, K v) {
         if (v != "x" && v != "y" && v != "z") throw ConfigError(k + ": expected x, y or z");
         c.observable.axis = v[0];
       }},
      {"observable.file", "", [](RunConfig& c, K, K v) { c.observable.file = v; }},
      {"tolerance.expectation", "0.01", [](RunConfig& c, K k, K v) { c.tolerance.expectation = to_double(k, v); }},
      {"tolerance.projector", "1e-10", [](RunConfig& c, K k, K v) { c.tolerance.projector = to_double(k, v); }},
      {"tolerance.quadrature", "1e-6", [](RunConfig& c, K k, K v) { c.tolerance.quadrature = to_double(k, v); }},
      {"tolerance.pt", "1e-9", [](RunConfig& c, K k, K v) { c.tolerance.pt = to_double(k, v); }},
      {"tolerance.transport", "1e-4", [](RunConfig& c, K k, K v) { c.tolerance.transport = to_double(k, v); }},
      {"tolerance.refinement_ratio", "3.5",
       [](RunConfig& c, K k, K v) { c.tolerance.refinement_ratio = to_double(k, v); }},
      {"tolerance.summability", "0.01", [](RunConfig& c, K k, K v) { c.tolerance.summability = to_double(k, v); }},
      {"tolerance.cone_rms", "0.5", [](RunConfig& c, K k, K v) { c.tolerance.cone_rms = to_double(k, v); }},
      {"tolerance.fixture", "1e-9", [](RunConfig& c, K k, K v) { c.tolerance.fixture = to_double(k, v); }},
      {"scan.s", "1", [](RunConfig& c, K k, K v) { c.scan.s = to_double(k, v); }},
      {"scan.alpha_max", "5", [](RunConfig& c, K k, K v) { c.scan.alpha_max = to_int(k, v); }},
      {"scan.l", "8", [](RunConfig& c, K k, K v) { c.scan.l = to_int(k, v); }},
      {"scan.distances", "1,2,3,4,5", [](RunConfig& c, K k, K v) { c.scan.distances = to_ints(k, v); }},
      {"scan.t_grid", "0,2,2.5,3,3.5,4,4.5,5,5.5,6",
       [](RunConfig& c, K k, K v) { c.scan.t_grid = to_doubles(k, v); }},
      {"scan.alphas", "1,2,3,4,5", [](RunConfig& c, K k, K v) { c.scan.alphas = to_ints(k, v); }},
      {"scan.t", "1", [](RunConfig& c, K k, K v) { c.scan.t = to_double(k, v); }},
      {"scan.radii", "0,1,2,3,4", [](RunConfig& c, K k, K v) { c.scan.radii = to_ints(k, v); }},
      {"scan.axis", "alpha", [](RunConfig& c, K k, K v) {
         if (v != "alpha" && v != "beta") throw ConfigError(k + ": expected alpha or beta");
         c.scan.axis = v;
       }},
      {"scan.transport_ds", "1e-3", [](RunConfig& c, K k, K v) { c.scan.transport_ds = to_double(k, v); }},
      {"oracle.enabled", "true", [](RunConfig& c, K k, K v) { c.oracle = to_bool(k, v); }},
      {"output.dir", "out", [](RunConfig& c, K, K v) { c.output_dir = v; }},
  };
  return table;
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  std::map<std::string, std::string> given;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const bool known = std::any_of(keys().begin(), keys().end(), [&](const Key& k) { return k.name == key; });
    if (!known) throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (!given.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }

  RunConfig cfg;
  for (const auto& k : keys()) {
    auto it = given.find(k.name);
    std::string value = it == given.end() ? k.fallback : it->second;
    if ((k.name == "model.file" || k.name == "observable.file") && !value.empty()) {
      value = resolve_path(value, base_dir);
    }
    k.apply(cfg, k.name, value);
    cfg.resolved[k.name] = value;
  }
  cfg.resolved["evolution.beta"] = std::to_string(cfg.evolution.beta);

  cfg.filter.spec.validate();
  cfg.evolution.validate();
  if (cfg.filter.gamma && !(*cfg.filter.gamma > 0.0)) throw ConfigError("filter.gamma must be positive");
  if (cfg.model.gap_bound && !(*cfg.model.gap_bound > 0.0)) throw ConfigError("model.gap_bound must be positive");
  if (cfg.model.gap_points < 2) throw ConfigError("model.gap_points must be at least 2");
  if (!(cfg.scan.s >= 0.0 && cfg.scan.s <= 1.0)) throw ConfigError("scan.s must lie in [0, 1]");
  if (cfg.scan.alpha_max < 1) throw ConfigError("scan.alpha_max must be at least 1");
  if (!(cfg.scan.transport_ds > 0.0)) throw ConfigError("scan.transport_ds must be positive");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(read_file(path), dir.empty() ? "." : dir);
}

ParamHamiltonian build_model(const RunConfig& cfg) {
  try {
    if (!cfg.model.file.empty()) return parse_model(read_file(cfg.model.file));
    return perturbed_classical(Lattice(cfg.model.dimension, cfg.model.extent), cfg.model.lambda);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

LocalOperator build_observable(const RunConfig& cfg, const Lattice& lat) {
  try {
    if (!cfg.observable.file.empty()) return parse_local_operator(read_file(cfg.observable.file), lat);
    const auto& xs = cfg.observable.site;
    if (static_cast<int>(xs.size()) != lat.dimension()) {
      throw ConfigError("observable.site needs " + std::to_string(lat.dimension()) + " coordinate(s)");
    }
    Site site{{xs[0], xs.size() > 1 ? xs[1] : 0}};
    lat.check(site);
    return LocalOperator::pauli(site, pauli_from_char(static_cast<char>(std::toupper(cfg.observable.axis))));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("observable: ") + e.what());
  }
}

}  // namespace adiacont
