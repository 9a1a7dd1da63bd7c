#pragma once

#include <stdexcept>
#include <string>

namespace permsft {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: malformed elements, mismatched dimensions, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exact kernel refused to run because its work budget would be exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace permsft
