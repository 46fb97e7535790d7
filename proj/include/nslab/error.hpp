#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nslab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary field operation on incompatible grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a law or operation (negative density, bad exponent, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Failure inside a time step: linear solve, Newton iteration or positivity guard.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual = 0.0, std::ptrdiff_t cell = -1)
      : Error(what), residual_(residual), cell_(cell) {}
  double residual() const { return residual_; }
  std::ptrdiff_t cell() const { return cell_; }

 private:
  double residual_;
  std::ptrdiff_t cell_;
};

// Malformed run configuration; line is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace nslab
