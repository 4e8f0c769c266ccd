#pragma once

#include <stdexcept>
#include <string>

namespace walkmax {

// Raised when an exact computation would exceed its operation budget.
// Callers that accept the cost can retry with a larger budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a root bracket cannot be established, i.e. the dominant
// denominator zero lies beyond the square-root branch point for this
// (scenario, p, k) and the real-t equation has no interior solution.
struct BracketError : std::runtime_error {
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace walkmax
