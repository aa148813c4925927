#pragma once

#include <stdexcept>
#include <string>

namespace pbdim {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrimeError : public Error {
 public:
  explicit NotPrimeError(long long p)
      : Error("not prime: " + std::to_string(p)) {}
};

class NotPrimePowerError : public Error {
 public:
  explicit NotPrimePowerError(long long q)
      : Error("not a prime power: " + std::to_string(q)) {}
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroError : public Error {
 public:
  DivisionByZeroError() : Error("division by zero field element") {}
};

class InadmissibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class UnknownPointError : public Error {
 public:
  explicit UnknownPointError(long long x)
      : Error("unknown point: " + std::to_string(x)) {}
};

class EmptyKError : public Error {
 public:
  EmptyKError() : Error("block size set K must be nonempty") {}
};

class BelowThresholdError : public Error {
 public:
  BelowThresholdError(long long y, long long a, long long c)
      : Error("no guaranteed representation: y=" + std::to_string(y) +
              " is below the usable range for A=" + std::to_string(a) +
              ", c=" + std::to_string(c)) {}
};

class BadGroupError : public Error {
 public:
  explicit BadGroupError(long long index)
      : Error("no such group: " + std::to_string(index)) {}
};

class BadKeepError : public Error {
 public:
  BadKeepError(long long keep, long long size)
      : Error("cannot keep " + std::to_string(keep) + " of a group of size " +
              std::to_string(size)) {}
};

/// Raised when an ingredient request cannot be resolved from the registry
/// or the built-in generators.  Carries the printable request.
class MissingIngredientError : public Error {
 public:
  explicit MissingIngredientError(const std::string& request)
      : Error("missing ingredient: " + request), request_(request) {}
  const std::string& request() const { return request_; }

 private:
  std::string request_;
};

class VerificationFailedError : public Error {
 public:
  using Error::Error;
};

class NoParametersError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pbdim
