#pragma once

#include <stdexcept>
#include <string>

namespace swapdesign {

/// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input detectable up front (design, schema, config). CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failure while executing an otherwise valid request. CLI exit code 3.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class BudgetMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidLevel : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParams : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateBudget : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateWeight : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class EmptyArm : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class RejectionLimitExceeded : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class SingularCovariance : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class IoError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace swapdesign
