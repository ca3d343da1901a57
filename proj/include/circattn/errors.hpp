#pragma once

#include <stdexcept>
#include <string>

namespace circattn {

// Operand dimensions disagree with the operation's contract.
class ShapeMismatch : public std::invalid_argument {
public:
  explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Argument value outside the valid domain (non-positive sizes, guard
// violations, unparseable text, invalid flag combinations).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A reweighting mode was requested without the reweighting tensor.
class MissingReweight : public std::invalid_argument {
public:
  explicit MissingReweight(const std::string& what) : std::invalid_argument(what) {}
};

// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace circattn
