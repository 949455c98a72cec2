#pragma once

#include <stdexcept>
#include <string>

namespace qrapnc {

// Bad input data: wrong dimensions, non-positive weights, inverted bounds.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally sound instance with empty feasible set.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Contract violation inside a solver; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace qrapnc
