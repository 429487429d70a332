#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcsvm {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or data handed to an operation.
class InputError : public Error {
  public:
    using Error::Error;
};

// Vectors, matrices or rasters of incompatible sizes.
class DimensionError : public InputError {
  public:
    using InputError::InputError;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public InputError {
  public:
    ParseError(const std::string& message, std::size_t line)
        : InputError(message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// Solver ran out of iterations; carries the residual KKT violation.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& message, double residual)
        : Error(message), residual_(residual) {}

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

// Filesystem or byte-level format failures.
class IoError : public Error {
  public:
    using Error::Error;
};

// Model/report document does not match the expected schema.
class SchemaError : public InputError {
  public:
    using InputError::InputError;
};

}  // namespace lcsvm
