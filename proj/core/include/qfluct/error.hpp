#pragma once

#include <stdexcept>
#include <string>

namespace qfluct {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. tan-fit at |f| >= pi/2b).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget before reaching the
/// requested tolerance. Carries the best estimate and the achieved bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_bound)
      : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// The kernel has no convergent improper integral over [0, inf).
class NonIntegrableKernelError : public Error {
 public:
  using Error::Error;
};

/// No admissible shift factor reproduces the requested correlation.
class InfeasibleCalibrationError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo calibration table is not monotone; more steps are needed.
class CalibrationResolutionError : public Error {
 public:
  using Error::Error;
};

/// A raw chain with |f| = 1 has no stationary distribution.
class NonStationaryError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfluct
