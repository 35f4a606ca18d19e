#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the dense Hilbert-space engine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operator or vector dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-convergence, degenerate data, non-finite values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace spinchain
