#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adiacont/filter.hpp"
#include "adiacont/hamiltonian.hpp"
#include "adiacont/heisenberg.hpp"
#include "adiacont/lattice.hpp"
#include "adiacont/operators.hpp"

namespace adiacont {

struct ModelConfig {
  int dimension = 1;
  int extent = 8;
  double lambda = 0.2;
  /// Model file in the parse_model format; overrides dimension, extent and lambda.
  std::string file;
  /// Lower bound on the gap; empty means the minimum of a gap scan.
  std::optional<double> gap_bound;
  int gap_points = 21;
};

struct FilterConfig {
  /// Empty means half the gap bound.
  std::optional<double> gamma;
  FilterSpec spec;
};

struct ObservableConfig {
  std::vector<int> site = {0};
  char axis = 'z';
  /// LocalOperator text file; overrides site and axis.
  std::string file;
};

struct ToleranceConfig {
  double expectation = 0.01;
  double projector = 1e-10;
  double quadrature = 1e-6;
  double pt = 1e-9;
  double transport = 1e-4;
  double refinement_ratio = 3.5;
  double summability = 0.01;
  double cone_rms = 0.5;
  double fixture = 1e-9;
};

struct ScanConfig {
  double s = 1.0;
  int alpha_max = 5;
  int l = 8;
  std::vector<int> distances = {1, 2, 3, 4, 5};
  std::vector<double> t_grid = {0.0, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  std::vector<int> alphas = {1, 2, 3, 4, 5};
  double t = 1.0;
  std::vector<int> radii = {0, 1, 2, 3, 4};
  std::string axis = "alpha";
  double transport_ds = 1e-3;
};

struct RunConfig {
  ModelConfig model;
  FilterConfig filter;
  EvolutionConfig evolution;
  ObservableConfig observable;
  ToleranceConfig tolerance;
  ScanConfig scan;
  bool oracle = true;
  std::string output_dir = "out";
  /// Every key as written, after defaults, for the run manifest.
  std::map<std::string, std::string> resolved;
};

/// Line-oriented `section.key = value` text; `#` starts a comment. Unknown
/// keys, duplicate keys and malformed values throw ConfigError. Relative file
/// paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// The model the configuration describes.
ParamHamiltonian build_model(const RunConfig& cfg);
/// The observable, placed on the model lattice.
LocalOperator build_observable(const RunConfig& cfg, const Lattice& lat);

}  // namespace adiacont
