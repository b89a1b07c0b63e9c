#pragma once

#include <stdexcept>
#include <string>

namespace lemonlens {

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, invariant-violating scenario, bad knots.
struct ConfigError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. v not in [0,1]).
struct DomainError : Error {
  using Error::Error;
};

// A numeric routine ran but could not reach its accuracy/convergence target.
struct NumericalError : Error {
  using Error::Error;
};

// Adaptive integration failed to converge within its depth budget.
struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};

// The monotone-virtual-valuation assumption failed where an operation needs it.
struct RegularityError : NumericalError {
  using NumericalError::NumericalError;
};

// An information structure collapsed to nothing usable (all signals null).
struct DegenerateError : Error {
  using Error::Error;
};

}  // namespace lemonlens
