#pragma once

#include <stdexcept>
#include <string>

namespace wag {

// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: out-of-range values, mismatched dimensions, unknown names.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Lookup of an id that does not exist.
class NotFoundError : public ArgumentError {
 public:
  explicit NotFoundError(const std::string& id)
      : ArgumentError("not found: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// Structured input that fails its contract (rank records, provider output).
class ValidationError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Filesystem / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Document parsed but does not match the expected schema. Carries the
// offending path ("nodes[3].category") in the message.
class SchemaError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace wag
