#pragma once

#include <stdexcept>
#include <string>

namespace hysim {

// Incompatible sector dimensions, wrong vector lengths, empty inputs.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A domain invariant was violated (non-Hermitian matrix, bad weights, ...).
class InvariantError : public std::invalid_argument {
 public:
  explicit InvariantError(const std::string& what) : std::invalid_argument(what) {}
};

// Integrator failure; carries the last fixed-point residual.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

// Configuration / expression parse problems; position is 1-based.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hysim
