#pragma once

#include <stdexcept>
#include <string>

namespace signcd {

// Bad construction parameters or malformed configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query point or estimate that falls outside the problem domain.
class OutOfDomain : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised on the first query past an oracle's budget.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace signcd
