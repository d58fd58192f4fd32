#pragma once

#include <stdexcept>
#include <string>

namespace batemanlab {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

class SubstitutionIncomplete : public Error {
 public:
  using Error::Error;
};

class OrderViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class EigenrelationFailure : public Error {
 public:
  using Error::Error;
};

class RepresentationError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge; the message carries the diagnostics.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace batemanlab
