#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpme {

/// Invalid model or discretization parameter (s outside (0,1), m < 2, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was not met by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested relative tail tolerance is out of reach below the term cap.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_tail)
      : std::runtime_error(what), achieved_tail_(achieved_tail) {}
  double achieved_tail() const noexcept { return achieved_tail_; }

 private:
  double achieved_tail_;
};

/// A step produced a field that is no longer nondecreasing.
class CflViolation : public std::runtime_error {
 public:
  CflViolation(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// NaN or Inf appeared during time stepping.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A metric is undefined for the given input (zero reference norm or mass).
class MetricUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical quadrature could not reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimated_error)
      : std::runtime_error(what), estimated_error_(estimated_error) {}
  double estimated_error() const noexcept { return estimated_error_; }

 private:
  double estimated_error_;
};

}  // namespace fpme
