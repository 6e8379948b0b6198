#pragma once

#include <stdexcept>
#include <string>

namespace nilspec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong dimensions, non-square input, a matrix that fails its structural check.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the domain of the operation (u outside I, bad a-ordering, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (JSON documents, command-line values).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace nilspec
