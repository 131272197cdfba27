#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adiacont/errors.hpp"
#include "adiacont/runner.hpp"

using namespace adiacont;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("adiacont_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c = parse_config("model.m = 4\nmodel.gap_points = 5\n");
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST_CASE("csv comparison") {
  const std::string a = "# k=v\nx,y\n1,2.0\n3,4\n";
  CHECK(compare_csv(a, a, 0.0).passed);
  const FixtureComparison near = compare_csv(a, "# k=v\nx,y\n1,2.0000000001\n3,4\n", 1e-9);
  CHECK(near.passed);
  CHECK(near.max_difference == doctest::Approx(1e-10).epsilon(1e-3));
  const FixtureComparison far = compare_csv(a, "# k=v\nx,y\n1,2.5\n3,4\n", 1e-9);
  CHECK_FALSE(far.passed);
  CHECK(far.max_difference == doctest::Approx(0.5));
  REQUIRE_FALSE(far.worst.empty());
  CHECK(far.worst[0].find("2") != std::string::npos);
  CHECK_FALSE(compare_csv(a, "# k=w\nx,y\n1,2.0\n3,4\n", 1.0).passed);
  CHECK_FALSE(compare_csv(a, "x,y\n1,2\n", 1.0).passed);
  CHECK_FALSE(compare_csv("a,b\n1,2\n", "a,b\n1\n", 1.0).passed);
  CHECK(compare_csv("a,b\n1,\n", "a,b\n1,\n", 0.0).passed);
  CHECK_THROWS_AS(compare_fixture(a, "/nonexistent/fixture.csv", 1e-9), Error);
}

TEST_CASE("experiment writes files and manifest") {
  const fs::path out = scratch("gap");
  const RunResult r = run_experiment("gap-scan", small_config(out));
  CHECK(r.passed());
  CHECK(fs::exists(out / "gap_scan.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("experiment") == "gap-scan");
  CHECK(manifest.at("passed") == true);
  CHECK(manifest.contains("config"));
  CHECK(manifest.contains("wall_time_seconds"));
  CHECK_THROWS_AS(run_experiment("no-such-experiment", small_config(out)), ConfigError);
  fs::remove_all(out);
}

TEST_CASE("runs are deterministic") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  run_experiment("filter-check", small_config(a));
  run_experiment("filter-check", small_config(b));
  for (const char* name : {"filter_chi_hat.csv", "filter_chi_time.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("fixture write and compare") {
  const fs::path out = scratch("fix_out");
  const fs::path fixtures = scratch("fix_dir");
  const RunConfig c = small_config(out);
  const RunResult written = run_experiment("gap-scan", c, {fixtures.string(), true});
  CHECK(written.passed());
  CHECK(fs::exists(fixtures / "gap-scan" / "gap_scan.csv"));
  const RunResult compared = run_experiment("gap-scan", c, {fixtures.string(), false});
  CHECK(compared.passed());

  std::string text = slurp(fixtures / "gap-scan" / "gap_scan.csv");
  const auto last = text.rfind(',');
  text.insert(last + 1, "9");
  std::ofstream(fixtures / "gap-scan" / "gap_scan.csv") << text;
  CHECK_FALSE(run_experiment("gap-scan", c, {fixtures.string(), false}).passed());

  fs::remove(fixtures / "gap-scan" / "gap_scan.csv");
  CHECK_THROWS_AS(run_experiment("gap-scan", c, {fixtures.string(), false}), ConfigError);
  fs::remove_all(out);
  fs::remove_all(fixtures);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(std::invalid_argument("x")) == 2);
  CHECK(exit_code_for(AssumptionViolation("x")) == 3);
  CHECK(exit_code_for(NumericalFailure("x")) == 4);
  CHECK(exit_code_for(WindowCapExceeded("x")) == 5);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("gap bound violations are assumption failures") {
  const fs::path out = scratch("gapbound");
  RunConfig c = small_config(out);
  c.model.gap_bound = 1.95;
  CHECK_THROWS_AS(run_experiment("gap-scan", c), AssumptionViolation);
  fs::remove_all(out);
}
