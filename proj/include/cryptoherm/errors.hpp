#pragma once

#include <stdexcept>
#include <string>

namespace cryptoherm {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions incompatible with the requested operation.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Matrix singular, or condition estimate above the configured cap.
class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

private:
  double condition_estimate_;
};

/// Hermitian input expected (within tolerance) but not supplied.
class SymmetryError : public Error {
public:
  using Error::Error;
};

/// Hermitian input is not positive definite. A legitimate query outcome,
/// not a crash: callers probing definiteness catch this.
class NotPositiveDefiniteError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced unusable output.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Result or input outside the representable range (overflow, NaN/Inf).
class RangeError : public Error {
public:
  using Error::Error;
};

/// Two evaluation routes that must agree disagreed beyond tolerance.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Vector with (numerically) zero norm where a nonzero norm is required.
class ZeroNormError : public Error {
public:
  using Error::Error;
};

/// Run-time parameter outside its documented domain.
class InvalidParameterError : public Error {
public:
  using Error::Error;
};

/// Malformed file or JSON document; the message names the offending field.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace cryptoherm
