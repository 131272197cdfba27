#include "adiacont/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "adiacont/errors.hpp"

namespace adiacont {

void FilterSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("filter gamma must be positive");
  if (mollifier_nodes < 2) throw ConfigError("filter mollifier_nodes must be at least 2");
  if (frequency_panels < 3 || frequency_panels % 3 != 0) {
    throw ConfigError("filter frequency_panels must be a positive multiple of 3");
  }
  if (nodes_per_panel < 2) throw ConfigError("filter nodes_per_panel must be at least 2");
  if (!(t_max_factor > 0.0)) throw ConfigError("filter t_max_factor must be positive");
}

GaussLegendre gauss_legendre(int n) {
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  GaussLegendre rule;
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  // zeros holds the nonnegative roots in ascending order
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : zeros) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

namespace {

double mollifier(double y) {
  const double q = 1.0 - y * y;
  return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
}

}  // namespace

BumpFilter::BumpFilter(FilterSpec spec) : spec_(spec) {
  spec_.validate();
  mollifier_ = gauss_legendre(spec_.mollifier_nodes);
  // mass of the mollifier on [-1, 0]; the full mass is twice this
  half_mass_ = 0.0;
  for (std::size_t i = 0; i < mollifier_.nodes.size(); ++i) {
    half_mass_ += mollifier_.weights[i] * mollifier(0.5 * mollifier_.nodes[i] - 0.5);
  }
  half_mass_ *= 0.5;
  base_rule_ = frequency_rule(spec_.frequency_panels);
  fine_rule_ = frequency_rule(2 * spec_.frequency_panels);
}

double BumpFilter::smooth_step(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > 0.0) return 1.0 - smooth_step(-x);
  // \int_{-1}^{x} mollifier, mapped from [-1, 1]
  const double half = 0.5 * (x + 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < mollifier_.nodes.size(); ++i) {
    acc += mollifier_.weights[i] * mollifier(half * mollifier_.nodes[i] + (x - 1.0) * 0.5);
  }
  return half * acc / (2.0 * half_mass_);
}

double BumpFilter::chi_hat(double omega) const {
  const double a = std::abs(omega);
  const double g = spec_.gamma;
  if (a <= g / 3.0) return 1.0;
  if (a >= g) return 0.0;
  return 1.0 - smooth_step(3.0 * a / g - 2.0);
}

double BumpFilter::chi_hat_derivative_bound(int j) const {
  if (j < 0 || j > 6) throw std::invalid_argument("derivative order must be in [0, 6]");
  if (j == 0) return 1.0;
  const double g = spec_.gamma;
  const double h = g / 400.0;
  const int samples = 6000;
  std::vector<double> binom(static_cast<std::size_t>(j) + 1, 1.0);
  for (int k = 1; k <= j; ++k) binom[k] = binom[k - 1] * (j - k + 1) / k;
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double omega = -1.1 * g + 2.2 * g * i / samples;
    double acc = 0.0;
    for (int k = 0; k <= j; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom[k] * chi_hat(omega + (0.5 * j - k) * h);
    }
    best = std::max(best, std::abs(acc) / std::pow(h, j));
  }
  return best;
}

BumpFilter::FrequencyRule BumpFilter::frequency_rule(int panels) const {
  const GaussLegendre gl = gauss_legendre(spec_.nodes_per_panel);
  const double g = spec_.gamma;
  // positive half [0, gamma]; panels counts the whole interval [-gamma, gamma]
  const int half_panels = panels / 2 + panels % 2;
  const double width = g / half_panels;
  FrequencyRule rule;
  for (int p = 0; p < half_panels; ++p) {
    const double lo = p * width;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double omega = lo + 0.5 * width * (gl.nodes[i] + 1.0);
      rule.omega.push_back(omega);
      rule.coeff.push_back(0.5 * width * gl.weights[i] * chi_hat(omega) / (2.0 * std::numbers::pi));
    }
  }
  return rule;
}

double BumpFilter::chi_from_rule(const FrequencyRule& rule, double t) {
  // chi is even in omega, so the e^{-iwt} integral over [-gamma, gamma]
  // reduces to twice the cosine integral over [0, gamma]
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.omega.size(); ++i) acc += rule.coeff[i] * std::cos(rule.omega[i] * t);
  return 2.0 * acc;
}

double BumpFilter::chi_time_fast(double t) const { return chi_from_rule(base_rule_, t); }

double BumpFilter::chi_time(double t) const {
  // full complex sum over the mirrored rule, negative and positive nodes in turn
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < base_rule_.omega.size(); ++i) {
    acc += base_rule_.coeff[i] * std::exp(std::complex<double>(0.0, -base_rule_.omega[i] * t));
  }
  for (std::size_t i = base_rule_.omega.size(); i-- > 0;) {
    acc += base_rule_.coeff[i] * std::exp(std::complex<double>(0.0, base_rule_.omega[i] * t));
  }
  if (std::abs(acc.imag()) > 1e-12) {
    throw NumericalFailure("chi(t) has imaginary part " + std::to_string(acc.imag()));
  }
  const double fine = chi_from_rule(fine_rule_, t);
  if (std::abs(fine - acc.real()) > 1e-10) {
    throw NumericalFailure("chi(t) quadrature not converged at t=" + std::to_string(t));
  }
  return acc.real();
}

std::complex<double> BumpFilter::spectral_weight(double omega) const {
  if (omega == 0.0) return 0.0;
  return {0.0, (1.0 - chi_hat(omega)) / omega};
}

Eigen::MatrixXd BumpFilter::spectral_weight_matrix(const Eigen::VectorXd& energies) const {
  const Eigen::Index n = energies.size();
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    w(c, c) = 0.0;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double v = spectral_weight(energies(r) - energies(c)).imag();
      w(r, c) = v;
      w(c, r) = -v;
    }
  }
  return w;
}

TimeQuadrature make_time_quadrature(const BumpFilter& filter, double max_frequency, int refinement) {
  const double g = filter.gamma();
  const double t_max = filter.spec().t_max_factor / g;
  const double rate = std::max(g, std::abs(max_frequency));
  const GaussLegendre gl = gauss_legendre(filter.spec().nodes_per_panel);
  const auto panels_per_side =
      static_cast<long>(std::ceil(t_max * rate)) * std::max(refinement, 1);
  const double width = t_max / static_cast<double>(panels_per_side);
  TimeQuadrature q;
  const auto total = static_cast<std::size_t>(2 * panels_per_side) * gl.nodes.size();
  q.t.reserve(total);
  q.weight.reserve(total);
  q.chi.reserve(total);
  for (long p = -panels_per_side; p < panels_per_side; ++p) {
    const double lo = static_cast<double>(p) * width;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = lo + 0.5 * width * (gl.nodes[i] + 1.0);
      q.t.push_back(t);
      q.weight.push_back(0.5 * width * gl.weights[i]);
      q.chi.push_back(filter.chi_time_fast(t));
    }
  }
  return q;
}

}  // namespace adiacont
