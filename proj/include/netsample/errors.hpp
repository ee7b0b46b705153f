#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netsample {

// Precondition violations (bad sizes, negative weights, infeasible generator
// parameters) are reported as std::invalid_argument. The types below cover
// the remaining failure classes.

/// Malformed edge-list input. Carries the 1-based line number when known.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input graph has more than one connected component.
class DisconnectedGraphError : public std::invalid_argument {
 public:
  explicit DisconnectedGraphError(std::size_t components)
      : std::invalid_argument("graph is disconnected (" + std::to_string(components) +
                              " components)"),
        components_(components) {}

  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

/// A factorization or residual check failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical invariant that must hold for valid inputs was observed to
/// fail (e.g. a lower bound above the optimum).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace netsample
