#pragma once

#include <stdexcept>
#include <string>

namespace morsewig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach the requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  /// Best relative error estimate reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A phase-space grid does not contain the support of the state.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// An internal identity (e.g. realness of a Wigner value) failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace morsewig
