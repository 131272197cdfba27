#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "adiacont/config.hpp"
#include "adiacont/errors.hpp"
#include "support.hpp"

using namespace adiacont;
using testing::site1;

TEST_CASE("defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.model.dimension == 1);
  CHECK(c.model.extent == 8);
  CHECK(c.model.lambda == 0.2);
  CHECK_FALSE(c.model.gap_bound.has_value());
  CHECK_FALSE(c.filter.gamma.has_value());
  CHECK(c.evolution.alpha == 2);
  CHECK(c.evolution.beta == 2);
  REQUIRE(c.evolution.s_grid.size() == 21);
  CHECK(c.evolution.s_grid[10] == doctest::Approx(0.5));
  CHECK(c.evolution.s_grid.back() == 1.0);
  CHECK(c.oracle);
  CHECK(c.resolved.at("evolution.beta") == "2");
  CHECK(c.resolved.size() > 40);
}

TEST_CASE("values, comments and dependent defaults") {
  const RunConfig c = parse_config(
      "# header\n"
      "model.m = 6   # ring\n"
      "model.gap_bound = 1.5\n"
      "filter.gamma = 0.6\n"
      "evolution.alpha = 3\n"
      "evolution.s_grid = 0, 0.5, 1\n"
      "evolution.check_convergence = false\n"
      "observable.site = 2\n"
      "observable.axis = x\n"
      "scan.t_grid = 1, 2\n");
  CHECK(c.model.extent == 6);
  CHECK(*c.model.gap_bound == 1.5);
  CHECK(*c.filter.gamma == 0.6);
  CHECK(c.evolution.alpha == 3);
  CHECK(c.evolution.beta == 3);
  CHECK(c.evolution.s_grid == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_FALSE(c.evolution.check_convergence);
  CHECK(c.scan.t_grid == std::vector<double>{1.0, 2.0});
  const ParamHamiltonian h = build_model(c);
  CHECK(h.lattice().num_sites() == 6);
  CHECK(build_observable(c, h.lattice()) == LocalOperator::pauli(site1(2), Pauli::X));
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(parse_config("model.colour = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.m = 6\nmodel.m = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.m\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.m = six\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.lambda = 0.2x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("evolution.check_convergence = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("evolution.s_grid = uniform:0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("observable.axis = w\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scan.axis = gamma\n"), ConfigError);
  const RunConfig c = parse_config("observable.site = 9\n");
  CHECK_THROWS(build_observable(c, Lattice(1, 8)));
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("files resolve against the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "adiacont_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "model.txt") << "dim=1, m=5, lambda=0.4\n";
    std::ofstream(dir / "obs.txt") << "1 0 1:Z 2:Z\n";
    std::ofstream(dir / "run.cfg") << "model.file = model.txt\nobservable.file = obs.txt\n";
  }
  const RunConfig c = load_config((dir / "run.cfg").string());
  const ParamHamiltonian h = build_model(c);
  CHECK(h.lattice().num_sites() == 5);
  CHECK((h.assemble(1.0).matrix() - testing::ring_hamiltonian(5, 0.4, 1.0)).norm() < 1e-13);
  const LocalOperator a = build_observable(c, h.lattice());
  CHECK(a.support() == SiteSet{site1(1), site1(2)});
  std::filesystem::remove_all(dir);
}
