#pragma once

#include <stdexcept>
#include <string>

namespace sdftest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (e.g. x outside [0, pi]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Model or configuration parameters violate their invariants.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (quadrature did not converge, Cholesky failed, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or insufficient input data.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdftest
