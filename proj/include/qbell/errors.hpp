#pragma once

#include <stdexcept>
#include <string>

namespace qbell {

// Thrown when a series, quadrature or theta sum cannot reach its tolerance.
// The message is prefixed with "module::operation".
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

// Bad physical parameters or argument combinations.
class InvalidInput : public std::invalid_argument {
 public:
  InvalidInput(const std::string& where, const std::string& what)
      : std::invalid_argument(where + ": " + what) {}
};

// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbell
