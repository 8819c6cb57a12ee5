#pragma once

#include <stdexcept>
#include <string>

namespace lexshift {

// Malformed configuration or arguments; the CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a format or invariant, or a computation is undefined
// for the given data; the CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexshift
