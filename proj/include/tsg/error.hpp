#pragma once

#include <stdexcept>
#include <string>

namespace tsg {

// Root of every error thrown by the library. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter combination outside the model's domain (e.g. d* >= 2R).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two points that must be distinct coincide.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Non-finite state, failed convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed or invalid scenario document. The message names the field.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsg
