#pragma once

#include <stdexcept>
#include <string>

namespace adiacont {

// Each error class maps to a distinct exit status of the command line runner.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (exit 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A modelling assumption does not hold: gap below the bound, degenerate
/// ground state, initial state not an eigenstate (exit 3).
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

/// Quadrature or ODE failed its own convergence certificate (exit 4).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A dense realization would exceed the supported number of sites (exit 5).
class WindowCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace adiacont
