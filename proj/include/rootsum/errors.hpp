#pragma once

#include <stdexcept>
#include <string>

namespace rootsum {

// A closed form, identity or cross-check produced a value that contradicts
// the independent route it is paired with.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An exhaustive oracle was asked for more work than its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The working precision cannot resolve the quantity being measured.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, long required_bits)
      : std::runtime_error(what + " (need at least " + std::to_string(required_bits) +
                           " bits)"),
        required_bits_(required_bits) {}

  long required_bits() const noexcept { return required_bits_; }

 private:
  long required_bits_;
};

}  // namespace rootsum
