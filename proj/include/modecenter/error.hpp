#pragma once

#include <stdexcept>
#include <string>

namespace modecenter {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (beta <= 0, h <= 0,
/// non-finite input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unusable configuration or degenerate data that the caller can fix by
/// supplying explicit parameters (zero spread, empty grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data problems: empty, unreadable or non-numeric.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (quadrature residual too large, vanishing
/// denominator, divergent integral).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace modecenter
