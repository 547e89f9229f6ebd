#pragma once

#include <stdexcept>
#include <string>

namespace convexlab {

/// Input violates an operation's precondition (bad dimension, bad parameter).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand dimensions do not agree.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative solver hit its budget before reaching the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace convexlab
