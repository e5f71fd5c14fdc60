#pragma once

#include <stdexcept>
#include <string>

namespace mfsinr {

// Raised when an iterative scheme cannot reach its accuracy target within its
// iteration cap, or when a result would overflow/lose all significance.
// Distinct from std::domain_error (invalid inputs) so callers can map the two
// onto different exit codes.
struct accuracy_error : std::runtime_error {
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an adaptive integration exceeds its panel budget before meeting
// its tolerance. Deliberately a separate type: the CLI maps it to its own exit
// code, and tests assert that a too-small budget errors rather than returning
// a silently wrong value.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mfsinr
