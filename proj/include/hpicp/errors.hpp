#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hpicp {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The caller violated a contract (mesh mismatch, invalid argument, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A configuration the library deliberately does not support.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The discrete operator is singular or indefinite.
class SolveError : public Error {
 public:
  using Error::Error;
};

// An iterative solver exhausted its budget. Carries the last iterate and a
// convergence certificate (relative residual for linear solves, duality gap
// for the TV prox).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, long iterations,
                   std::vector<double> last_iterate = {})
      : Error(what),
        residual_(residual),
        iterations_(iterations),
        last_iterate_(std::move(last_iterate)) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  double residual_;
  long iterations_;
  std::vector<double> last_iterate_;
};

// Raised by a step when the gradient vanishes while the residual does not;
// the run loop turns this into the `stagnation` stop reason.
class StagnationSignal : public Error {
 public:
  using Error::Error;
};

}  // namespace hpicp
