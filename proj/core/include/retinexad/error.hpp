#pragma once

#include <stdexcept>
#include <string>

namespace retinexad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied parameters or data outside an operation's contract
/// ("invalid tiling", "plane too small", "unstable step", ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an image or report failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace retinexad
