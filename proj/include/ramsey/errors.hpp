#pragma once

#include <stdexcept>
#include <string>

namespace ramsey {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameter or precondition violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Protocol with vanishing phase accumulation, so b is not identifiable.
class DegenerateProtocolError : public Error {
 public:
  using Error::Error;
};

/// Dicke-basis dimension above the configured maximum.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Coarse scan found no interior minimum to refine.
class NoBracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace ramsey
