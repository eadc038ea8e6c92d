#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beurling {

/// Raised when expression text cannot be parsed. `position` is the byte
/// offset into the input where the problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised when a function evaluation cannot produce a usable real value.
class EvalError : public std::runtime_error {
 public:
  enum class Kind {
    domain,       // argument outside the declared domain
    nonfinite,    // evaluation produced inf or nan
    nonpositive,  // function is declared positive but produced <= 0
  };

  EvalError(Kind kind, std::string message, double x)
      : std::runtime_error(std::move(message)), kind_(kind), x_(x) {}

  Kind kind() const { return kind_; }
  double argument() const { return x_; }

 private:
  Kind kind_;
  double x_;
};

/// Raised when a numeric routine (quadrature, ODE stepping, extrapolation)
/// cannot meet its contract: tolerance not reachable, step underflow,
/// degenerate input data, and similar conditions.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(std::string message)
      : std::runtime_error(std::move(message)) {}
};

/// Raised for invalid configuration of checks and scenarios (bad grids,
/// schedules, parameter ranges, malformed scenario files).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::string message)
      : std::runtime_error(std::move(message)) {}
};

}  // namespace beurling
