#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treeperm {

/// Malformed input text (tensor, decomposition, zonotope files). Carries the
/// 1-based line number when one is known, 0 otherwise.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A decomposition fails coverage, edge coverage or connectedness.
class InvalidDecomposition : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Total bag cardinality above the bitmask cap.
class WidthTooLarge : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Oracle enumeration budget or size cap exceeded.
class BudgetExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested function does not apply to the tensor (wrong order, etc.).
class IncompatibleInput : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Zonotope system has more extra edge directions than configured.
class DirectionCapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace treeperm
