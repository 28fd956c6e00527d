#pragma once

#include <stdexcept>
#include <string>

namespace eigenrisk {

// Invalid input / violated precondition.  CLI maps this to exit code 1.
class usage_error : public std::invalid_argument {
 public:
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure (bracket exhaustion, truncation cap, factorization
// failure, ...).  CLI maps this to exit code 2.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eigenrisk
