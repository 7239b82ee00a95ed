#pragma once

#include <stdexcept>
#include <string>

namespace gcs {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user input: malformed arguments, schema violations, bad flags.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

/// The destination cannot be reached from the requested start vertex.
class NoPathError : public Error {
 public:
  explicit NoPathError(const std::string& what) : Error(what) {}
};

/// An enumeration exceeded its size cap; the instance is too large for
/// exhaustive treatment.
class TooLargeError : public Error {
 public:
  explicit TooLargeError(const std::string& what) : Error(what) {}
};

/// An instance generator could not satisfy its own constraints.
class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what) : Error(what) {}
};

/// An internal consistency check failed. Indicates a bug or a solver
/// tolerance misconfiguration, not a user error.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace gcs
