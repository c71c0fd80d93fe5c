#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

/// Base of every error raised by the library. The CLI maps the subclasses
/// onto its exit-code contract (2 validation, 3 numerical, 4 I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration or out-of-domain arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GridMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure: a series that did not converge, a singular factorization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace viscowave
