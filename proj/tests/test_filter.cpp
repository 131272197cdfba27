#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "adiacont/errors.hpp"
#include "adiacont/filter.hpp"

using namespace adiacont;
using boost::math::quadrature::gauss_kronrod;

namespace {

double mollifier(double y) { return std::abs(y) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - y * y)); }

// Gauss-Kronrod reference for the smooth step and the bump.
double panel_integral(double a, double b) {
  constexpr int panels = 8;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    acc += gauss_kronrod<double, 61>::integrate(mollifier, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, 0);
  }
  return acc;
}

double oracle_step(double x) {
  static const double mass = panel_integral(-1.0, 1.0);
  return panel_integral(-1.0, x) / mass;
}

double oracle_chi_hat(double omega, double gamma) {
  const double a = std::abs(omega);
  if (a <= gamma / 3.0) return 1.0;
  if (a >= gamma) return 0.0;
  return 1.0 - oracle_step(3.0 * a / gamma - 2.0);
}

// chi(t) = (1/pi) \int_0^gamma chi_hat(w) cos(wt) dw, band on fixed Kronrod panels.
double oracle_chi(double t, double gamma) {
  const double plateau = t == 0.0 ? gamma / 3.0 : std::sin(gamma * t / 3.0) / t;
  auto band = [&](double w) { return oracle_chi_hat(w, gamma) * std::cos(w * t); };
  constexpr int panels = 48;
  const double width = (2.0 * gamma / 3.0) / panels;
  double edge = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = gamma / 3.0 + p * width;
    edge += gauss_kronrod<double, 61>::integrate(band, a, a + width, 0);
  }
  return (plateau + edge) / std::numbers::pi;
}

BumpFilter make(double gamma) {
  FilterSpec spec;
  spec.gamma = gamma;
  return BumpFilter(spec);
}

}  // namespace

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const GaussLegendre gl = gauss_legendre(8);
  double sum = 0.0;
  double x14 = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    sum += gl.weights[i];
    x14 += gl.weights[i] * std::pow(gl.nodes[i], 14);
  }
  CHECK(gl.nodes.size() == 8);
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("chi_hat plateau, support and midpoint") {
  for (double g : {0.5, 1.0, 2.0}) {
    const BumpFilter f = make(g);
    CHECK(f.chi_hat(0.0) == 1.0);
    for (int i = 0; i <= 200; ++i) {
      const double w = g / 3.0 * i / 200.0;
      CHECK(f.chi_hat(w) == 1.0);
      CHECK(f.chi_hat(-w) == 1.0);
      CHECK(f.chi_hat(g + 0.01 * g * i) == 0.0);
      CHECK(f.chi_hat(-g - 0.01 * g * i) == 0.0);
    }
    CHECK(f.chi_hat(2.0 * g / 3.0) == doctest::Approx(0.5).epsilon(1e-14));
    const double mid = f.chi_hat(g / 2.0);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
  }
}

TEST_CASE("chi_hat matches an adaptive quadrature oracle on the band") {
  const BumpFilter f = make(1.0);
  for (double w : {0.34, 0.4, 0.5, 0.6, 0.66, 0.75, 0.9, 0.99}) {
    CHECK(std::abs(f.chi_hat(w) - oracle_chi_hat(w, 1.0)) < 1e-13);
  }
}

TEST_CASE("smooth step is monotone and antisymmetric") {
  const BumpFilter f = make(1.0);
  double prev = 0.0;
  for (int i = -100; i <= 100; ++i) {
    const double x = i / 100.0;
    const double v = f.smooth_step(x);
    CHECK(v >= prev);
    CHECK(v + f.smooth_step(-x) == doctest::Approx(1.0).epsilon(1e-15));
    prev = v;
  }
  CHECK(f.smooth_step(-1.0) == 0.0);
  CHECK(f.smooth_step(1.0) == 1.0);
}

TEST_CASE("mollifier node count is converged") {
  FilterSpec coarse;
  FilterSpec fine;
  fine.mollifier_nodes = 256;
  const BumpFilter a(coarse);
  const BumpFilter b(fine);
  for (int i = -9; i <= 9; ++i) CHECK(std::abs(a.smooth_step(i / 10.0) - b.smooth_step(i / 10.0)) < 1e-13);
}

TEST_CASE("chi(t) matches the oracle transform") {
  for (double g : {0.5, 1.0}) {
    const BumpFilter f = make(g);
    for (double u : {0.0, 0.5, 1.0, 3.0, 10.0, 25.0, 50.0}) {
      const double t = u / g;
      CHECK(std::abs(f.chi_time(t) - oracle_chi(t, g)) < 1e-12 * g);
      CHECK(std::abs(f.chi_time_fast(t) - f.chi_time(t)) < 1e-13 * g);
    }
    CHECK(f.chi_time(0.0) == doctest::Approx(f.chi_time(-0.0)));
    CHECK(f.chi_time(3.0 / g) == doctest::Approx(f.chi_time(-3.0 / g)).epsilon(1e-14));
  }
}

TEST_CASE("chi scales as gamma chi_1(gamma t)") {
  const BumpFilter unit = make(1.0);
  const BumpFilter f = make(2.0);
  for (double t : {0.1, 1.3, 7.7}) CHECK(f.chi_time(t) == doctest::Approx(2.0 * unit.chi_time(2.0 * t)).epsilon(1e-10));
}

TEST_CASE("time quadrature reproduces chi_hat") {
  const BumpFilter f = make(0.8);
  const TimeQuadrature q = make_time_quadrature(f, 3.0);
  for (double w : {0.0, 0.2, 0.5, 0.7, 1.0, 3.0}) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.t.size(); ++i) acc += q.weight[i] * q.chi[i] * std::cos(w * q.t[i]);
    CHECK(std::abs(acc - f.chi_hat(w)) < 1e-8);
  }
}

TEST_CASE("spectral weight") {
  const BumpFilter f = make(1.0);
  CHECK(f.spectral_weight(0.0) == std::complex<double>(0.0, 0.0));
  CHECK(f.spectral_weight(0.2) == std::complex<double>(0.0, 0.0));
  for (double w : {1.0, 1.5, -2.0, 10.0}) {
    CHECK(f.spectral_weight(w).real() == 0.0);
    CHECK(f.spectral_weight(w).imag() == doctest::Approx(1.0 / w).epsilon(1e-15));
  }
  for (double w : {0.4, 0.7, 0.95}) {
    const std::complex<double> expected = (f.chi_hat(w) - 1.0) / std::complex<double>(0.0, w);
    CHECK(std::abs(f.spectral_weight(w) - expected) < 1e-15);
    CHECK(f.spectral_weight(-w) == -f.spectral_weight(w));
  }
  Eigen::VectorXd e(3);
  e << -1.0, 0.3, 2.0;
  const Eigen::MatrixXd m = f.spectral_weight_matrix(e);
  CHECK((m + m.transpose()).norm() == 0.0);
  CHECK(m(2, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("derivative bounds") {
  const BumpFilter f = make(1.0);
  CHECK(f.chi_hat_derivative_bound(0) == 1.0);
  double prev = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double b = f.chi_hat_derivative_bound(j);
    CHECK(b > prev);
    prev = b;
  }
  // scaling: d^j chi_hat_gamma = gamma^{-j} d^j chi_hat_1
  const BumpFilter g2 = make(2.0);
  CHECK(g2.chi_hat_derivative_bound(2) == doctest::Approx(f.chi_hat_derivative_bound(2) / 4.0).epsilon(1e-3));
  CHECK_THROWS_AS((void)f.chi_hat_derivative_bound(7), std::invalid_argument);
}

TEST_CASE("filter parameter validation") {
  FilterSpec bad;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  FilterSpec panels;
  panels.frequency_panels = 10;
  CHECK_THROWS_AS(BumpFilter{panels}, ConfigError);
}
