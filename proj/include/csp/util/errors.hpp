#pragma once

#include <stdexcept>
#include <string>

namespace csp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input data (malformed dataset, schema violation, bad annotation file).
struct SchemaError : Error {
  using Error::Error;
};

// Invalid argument to an operation (avg_dl <= 0, empty corpus, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Transport / provider failure. `retryable` distinguishes timeouts from
// hard protocol errors.
struct TransportError : Error {
  TransportError(const std::string& msg, bool retryable_ = false)
      : Error(msg), retryable(retryable_) {}
  bool retryable;
};

// Dataset/checkpoint written by a different format version.
struct VersionError : Error {
  using Error::Error;
};

}  // namespace csp
