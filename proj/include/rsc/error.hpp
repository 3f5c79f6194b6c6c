#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: CSV rows, config files, accuracy matrices.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  /// 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Data and model disagree on attributes or labels.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A model that retained zero spheres cannot classify anything.
class UnusableModelError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsc
