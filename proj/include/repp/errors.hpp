// Error types shared by every module. Each carries the CLI exit code it maps to.
#pragma once

#include <stdexcept>
#include <string>

namespace repp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Digit resolution exceeded, or a distance could not be resolved at the
/// current resolution.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Object used before the state it needs was established.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Interval-count (or similar) cap reached.
class CapError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Not enough data for a goodness-of-fit test to be meaningful.
class UnderpoweredError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

}  // namespace repp
