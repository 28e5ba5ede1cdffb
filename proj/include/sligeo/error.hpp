#pragma once

#include <stdexcept>
#include <string>

namespace sligeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an argument that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or degenerate (duplicate points, bad cells, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (singular system, optimizer gave up).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sligeo
