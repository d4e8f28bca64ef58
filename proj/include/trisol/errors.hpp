#pragma once

#include <stdexcept>
#include <string>

namespace trisol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Closed-form constants need N >= 3.
class DimensionTooSmallError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The exponent q lies outside [1, 2*[.
class ExponentOutOfRangeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// No lattice node classifies as interior.
class EmptyInteriorError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// B(x0, D) is not contained in the domain.
class BallNotContainedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The time integral of the source diverges as the lower cutoff shrinks.
class SingularIntegralError : public Error {
 public:
  using Error::Error;
};

/// The admissible parameter interval is empty (lhs <= rhs).
class EmptyIntervalError : public Error {
 public:
  using Error::Error;
};

/// The mountain-pass path has no interior point above both endpoints.
class PathCollapseError : public Error {
 public:
  using Error::Error;
};

/// A run configuration failed validation. `what()` carries the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trisol
