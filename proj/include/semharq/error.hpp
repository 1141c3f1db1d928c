#pragma once

#include <stdexcept>
#include <string>

namespace semharq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed arguments that violate an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vectors or matrices whose dimensions do not line up.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Unreadable, corrupt or unsupported persisted data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace semharq
