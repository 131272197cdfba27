#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "adiacont/config.hpp"
#include "adiacont/errors.hpp"
#include "adiacont/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-picture quasi-adiabatic simulation of gapped spin lattices"};
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::string fixture_dir;
  bool write_fixtures = false;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember(adiacont::experiment_names()));
  run->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides ADIACONT_OUT and output.dir)");
  run->add_option("--fixtures", fixture_dir, "regression fixture directory");
  run->add_flag("--write-fixtures", write_fixtures, "write fixtures instead of comparing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    adiacont::RunConfig cfg = adiacont::load_config(config_path);
    if (const char* env = std::getenv("ADIACONT_OUT"); env && *env) cfg.output_dir = env;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.resolved["output.dir"] = cfg.output_dir;
    if (write_fixtures && fixture_dir.empty()) throw adiacont::ConfigError("--write-fixtures needs --fixtures");

    const adiacont::RunResult result =
        adiacont::run_experiment(experiment, cfg, adiacont::FixtureOptions{fixture_dir, write_fixtures});
    for (const auto& a : result.assertions) {
      std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.value << " (threshold " << a.threshold
                << ")\n";
    }
    for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
    return result.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return adiacont::exit_code_for(e);
  }
}
