#pragma once

#include <stdexcept>
#include <string>

namespace volta {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input document could not be read or decoded.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A structurally invalid network was handed to an operation that needs a
// valid one.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An internal mathematical cross-check failed (these identities are verified
// at runtime, not assumed).
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Caller passed arguments outside an operation's contract (unknown vertex,
// equal endpoints, malformed flag value, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace volta
