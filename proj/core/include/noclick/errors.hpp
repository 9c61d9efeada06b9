#pragma once

#include <stdexcept>
#include <string>

namespace noclick {

// Base of every error thrown by the library. The three mid-level
// categories map onto the CLI exit codes: UsageError -> 1,
// PhysicsError -> 2, NumericError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class PhysicsError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// -- usage / input errors -------------------------------------------------

class DimensionMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

class IndexOutOfRange : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidParameter : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidProbability : public UsageError {
 public:
  using UsageError::UsageError;
};

class DegenerateSettings : public UsageError {
 public:
  using UsageError::UsageError;
};

class InsufficientSettings : public UsageError {
 public:
  using UsageError::UsageError;
};

class MissingSigma : public UsageError {
 public:
  using UsageError::UsageError;
};

class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

// -- physics validation errors --------------------------------------------

// A symplectic eigenvalue fell below 1 by more than the physicality
// tolerance, i.e. the matrix cannot be the covariance of a quantum state.
class Unphysical : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class NonzeroDisplacement : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

// -- numerical errors ------------------------------------------------------

class NumericalFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

class IllConditioned : public NumericError {
 public:
  using NumericError::NumericError;
};

class NegativeDiscriminant : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoRealRoot : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonpositiveDeterminant : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonpositiveRoot : public NumericError {
 public:
  using NumericError::NumericError;
};

class CutoffTooSmall : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace noclick
