#pragma once

#include <stdexcept>
#include <string>

namespace paradoxlab {

// Error taxonomy shared with the CLI exit-code contract:
//   IoError      -> exit 1 (unreadable files, unusable input data)
//   ConfigError  -> exit 2 (invalid flags, invalid generator spec)
//   NumericError -> exit 3 (degenerate statistics, component collapse)
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested degree-attribute correlation cannot be realized
// on the generated topology; carries the best value actually achieved.
class UnreachableCorrelationError : public ConfigError {
 public:
  UnreachableCorrelationError(const std::string& msg, double achieved)
      : ConfigError(msg), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace paradoxlab
