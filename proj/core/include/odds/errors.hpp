#pragma once

#include <stdexcept>
#include <string>

namespace odds {

// Bad input, schema, or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a failed numeric procedure. CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace odds
