#pragma once

#include <stdexcept>
#include <string>

namespace balance {

// Raised when a search would exceed its node budget.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A pusher produced an offer outside the configured arc S^gamma.
class IllegalOfferError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An internal guarantee was violated; indicates a bug, not bad input.
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Inconsistent game configuration (e.g. incompatible policy and offer set).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace balance
