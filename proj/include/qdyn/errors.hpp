#pragma once

#include <stdexcept>
#include <string>

namespace qdyn {

/// Operand failed validation (non-Hermitian input, dimension mismatch, ...).
class InvalidOperand : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where an operation is defined.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A closed-form expression was evaluated at a point where it is singular.
class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qdyn
