#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rindler {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario or model configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for numeric failures: bad domains, non-finite values, solver trouble
/// (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation, e.g. an event
/// beyond the Rindler horizon.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A caller broke an operation precondition that is not a domain issue.
class PreconditionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A user-supplied or built-in function produced a non-finite value.
class EvaluationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DifferentiationError : public NumericError {
 public:
  DifferentiationError(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IntegrationError : public NumericError {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : NumericError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, std::vector<double> residuals)
      : NumericError(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Raised when an experiment cannot be completed (e.g. no absorption event).
class ExperimentError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace rindler
