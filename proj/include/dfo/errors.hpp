#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dfo {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The objective produced NaN or infinity. Carries the offending input so
/// callers can reproduce the evaluation.
class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(std::string message, std::vector<double> at)
      : Error(std::move(message)), at_(std::move(at)) {}

  const std::vector<double>& where() const noexcept { return at_; }

 private:
  std::vector<double> at_;
};

/// An operation was applied to a space kind it does not support
/// (e.g. clamp on a binary hypercube, DE on a binary space).
class UnsupportedSpaceError : public Error {
 public:
  using Error::Error;
};

class EmptyPopulationError : public Error {
 public:
  using Error::Error;
};

/// Constriction coefficient requested with c1 + c2 < 4; the square root in
/// the formula would be complex-valued.
class InvalidConstrictionError : public Error {
 public:
  using Error::Error;
};

/// The CMA-ES covariance matrix lost positive definiteness (or its
/// factorization failed numerically).
class CovarianceDegenerateError : public Error {
 public:
  using Error::Error;
};

/// Configuration text or experiment setup is invalid. `line` is 1-based when
/// the error can be pinned to a config line, 0 otherwise.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfo
