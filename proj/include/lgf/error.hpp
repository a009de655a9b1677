#pragma once

#include <stdexcept>
#include <string>

namespace lgf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a quadrature routine fails to meet its tolerance. Carries the
/// best value and error estimate reached before giving up.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double best_value, double best_error)
      : Error(what), best_value_(best_value), best_error_(best_error) {}

  double best_value() const noexcept { return best_value_; }
  double best_error() const noexcept { return best_error_; }

 private:
  double best_value_;
  double best_error_;
};

/// Raised for inputs outside an operation's certified domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a stencil application reads outside the available field.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Raised when a stored artifact is malformed or fails its checksum.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgf
