#pragma once

#include <string>
#include <vector>

#include "adiacont/config.hpp"

namespace adiacont {

inline constexpr const char* kToolVersion = "0.1.0";

/// Experiment names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

struct Assertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct FixtureOptions {
  /// Directory holding `<experiment>/<file>.csv`; empty disables comparison.
  std::string dir;
  bool write = false;
};

struct RunResult {
  std::string experiment;
  std::vector<std::string> files;  // written CSV paths
  std::vector<Assertion> assertions;
  [[nodiscard]] bool passed() const;
};

/// Runs one experiment, writes its CSV files and `manifest.json` into
/// cfg.output_dir, and checks the configured assertions.
RunResult run_experiment(const std::string& experiment, const RunConfig& cfg, const FixtureOptions& fixtures = {});

struct FixtureComparison {
  bool passed = false;
  std::size_t compared = 0;
  double max_difference = 0.0;
  /// Worst mismatches, `row,column: current vs fixture`.
  std::vector<std::string> worst;
};

/// Elementwise comparison of two CSV texts: numeric cells within `tolerance`,
/// other cells equal, identical shape. Comment lines starting with `#` are
/// compared like data.
FixtureComparison compare_csv(const std::string& current, const std::string& fixture, double tolerance,
                              std::size_t report = 5);

/// Compares a CSV text against a fixture file; throws Error if it is missing.
FixtureComparison compare_fixture(const std::string& current, const std::string& fixture_path, double tolerance);

/// Maps an exception thrown by run_experiment to the process exit status.
int exit_code_for(const std::exception& e);

}  // namespace adiacont
