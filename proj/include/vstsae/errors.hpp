#pragma once

#include <stdexcept>
#include <string>

namespace vstsae {

// Failure classes map onto CLI exit codes: input = 2, numerical = 3,
// bootstrap budget = 4.

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BootstrapBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vstsae
