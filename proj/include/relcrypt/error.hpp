#pragma once

#include <stdexcept>
#include <string>

namespace relcrypt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (rationals, symbols, scenario files).
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// A geometric or structural precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two systems cannot be composed or compared because their ports disagree.
class InterfaceError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed the configured bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace relcrypt
