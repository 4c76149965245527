#pragma once

#include <stdexcept>
#include <string>

namespace stochcone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix function or cone constructor was applied outside its domain
/// (nonpositive eigenvalue, t out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// A size guard was exceeded (product cap, upper-set enumeration limit).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (bad JSON, unknown names, invalid parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace stochcone
