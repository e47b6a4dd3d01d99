#pragma once

#include <stdexcept>
#include <string>

namespace nmrsp {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: wrong dimension, non-Hermitian matrix, parameter out of range.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Closed-form dephasing value requested outside [pi/dw, 2 pi/dw].
class OutsideValidityWindow : public Error {
 public:
  using Error::Error;
};

/// The transition equation has no real root for the requested control time.
class NoTransition : public Error {
 public:
  using Error::Error;
};

/// Intermediate map Lambda_{t+eps,t} undefined because the decoherence function vanishes at t.
class SingularIntermediateMap : public Error {
 public:
  SingularIntermediateMap(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace nmrsp
