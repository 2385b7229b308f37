#pragma once

#include <stdexcept>
#include <string>

namespace noteffect {

// Malformed or inconsistent input data (schema violations, "no data", ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A pipeline stage could not produce any usable result.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noteffect
