#pragma once

#include <stdexcept>
#include <string>

namespace circfilt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a non-finite or otherwise unusable result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fisher metric too ill-conditioned (or indefinite) to solve against.
class ConditioningError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// All particle weights collapsed.
class DegeneracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circfilt
