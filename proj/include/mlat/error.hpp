#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mlat {

/// Input does not describe the structure it claims to (not an order, not a lattice, bad carrier).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Order relation with a cycle through distinct elements. `cycle` lists element names,
/// first element repeated at the end.
class OrderCycleError : public StructuralError {
 public:
  OrderCycleError(std::string what, std::vector<std::string> cycle)
      : StructuralError(std::move(what)), cycle(std::move(cycle)) {}
  std::vector<std::string> cycle;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input exceeds a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A property that must hold for every valid input failed. This means a bug or a false theorem.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Construction undefined for the given input (e.g. a pair of operators on the one-element lattice).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::string field)
      : std::runtime_error(msg), line(line), field(std::move(field)) {}
  std::size_t line;   // 0 when unknown
  std::string field;  // offending field, empty when unknown
};

}  // namespace mlat
