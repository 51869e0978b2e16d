#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace carenet {

/// Invalid scenario, population or distribution configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A power-law target mean that no exponent can reach on the given support.
class UnsatisfiableMeanError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Malformed or inconsistent input data (observed series, trial batches).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method failed to converge; carries the last iterate.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<double> last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace carenet
