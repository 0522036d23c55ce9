#pragma once

#include <stdexcept>
#include <string>

namespace poremetrics {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (CLI exit code 2).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Enumeration depth too shallow to certify the requested answer (CLI exit code 3).
class InsufficientDepthError : public Error {
 public:
  using Error::Error;
};

/// Oracle variant or dimension does not support the query.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace poremetrics
