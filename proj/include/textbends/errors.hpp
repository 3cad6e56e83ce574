#pragma once

#include <stdexcept>
#include <string>

namespace textbends {

/// Base of every error raised by the kit. The C API maps each subclass to a
/// status code, and the CLI maps status codes to exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or command-line usage.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Corpus contents violate a schema invariant (dangling key, duplicate id,
/// malformed record, stale tf column).
class IntegrityError : public Error {
  public:
    using Error::Error;
};

/// A numeric kernel was called outside its domain.
class DomainError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// Repeated executions of one query produced different results.
class NondeterminismError : public Error {
  public:
    using Error::Error;
};

}  // namespace textbends
