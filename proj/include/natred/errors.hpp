#pragma once

#include <stdexcept>
#include <string>

namespace natred {

/// Invalid input: bad parameters, mismatched dimensions, malformed files.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that was well posed but failed numerically.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace natred
