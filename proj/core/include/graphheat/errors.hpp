#pragma once

#include <stdexcept>
#include <string>

namespace graphheat {

// A graph that fails validation was passed to an operation requiring a valid one.
class InvalidGraph : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neither evaluation method met the requested tolerance within the term budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (NaN, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace graphheat
