#pragma once

#include <stdexcept>
#include <string>

namespace tfbd {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. nu not in (0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Model parameters that are valid numbers but not supported by the requested operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Result cannot be trusted in double precision (cancellation, overflow, out of safe range).
class AccuracyLossError : public Error {
 public:
  using Error::Error;
};

/// A floating coefficient left the representable range.
class OverflowError : public AccuracyLossError {
 public:
  using AccuracyLossError::AccuracyLossError;
};

/// Request exceeds a configured size limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration did not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double achieved_error)
      : Error(what), estimate_(estimate), achieved_error_(achieved_error) {}

  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double estimate_;
  double achieved_error_;
};

/// ODE oracle: probability mass reached the truncation boundary or conservation drifted.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Simulation left the supported state range.
class RunawayError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfbd
