#pragma once

#include <stdexcept>
#include <string>

namespace balis {

/// Invalid parameters or malformed configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A size guard on an exponential-time routine was violated (exit code 3).
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed graph file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An online algorithm tried to read information it has not been shown.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace balis
