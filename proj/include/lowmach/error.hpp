/// @file error.hpp
/// @brief Exception hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace lowmach {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fields defined on different grids were combined.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the admissible range (exponent, window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Initial data violates a precondition (negative density, Theta <= 0, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration key or value.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Iterative or spectral solver did not deliver the requested accuracy.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Time step exceeds the stability limit.
class CflError : public Error {
 public:
  CflError(const std::string& what, double dt, double dt_max)
      : Error(what), dt_(dt), dt_max_(dt_max) {}
  double dt() const { return dt_; }
  double dt_max() const { return dt_max_; }

 private:
  double dt_;
  double dt_max_;
};

}  // namespace lowmach
