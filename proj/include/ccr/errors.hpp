#pragma once

#include <stdexcept>
#include <string>

namespace ccr {

/// Operands from different rings, mismatched lengths or dimensions.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size cap was exceeded.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An operation was called on input that violates its documented precondition.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure did not reach the required accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccr
