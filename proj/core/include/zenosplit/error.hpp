#pragma once

#include <stdexcept>
#include <string>

namespace zenosplit {

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a well-formed computation cannot produce its result,
/// e.g. no switch point inside the pass budget.
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zenosplit
