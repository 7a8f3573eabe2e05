#pragma once

#include <stdexcept>
#include <string>

namespace qdice {

/// A state or test target does not match the expected register shape.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A parameter lies outside the range where an operation is defined.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// p + eta = 0, which leaves the U_eta rotation undefined.
class DegenerateParameterError : public DomainError {
 public:
  explicit DegenerateParameterError(const std::string& what) : DomainError(what) {}
};

/// A root finder was handed a bracket without a sign change.
class BracketingError : public std::runtime_error {
 public:
  explicit BracketingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdice
