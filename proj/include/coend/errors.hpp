#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coend {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Composition or application across incompatible finite sets.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// A truncated functor is too small for the requested computation.
class BoundTooSmall : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed the configured cap.
class SearchTooLarge : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Arithmetic on the natural-number carrier left the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// Malformed formula text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Malformed or inconsistent input file. Line and column are 1-based; 0 means unknown.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " (line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Black-box function returned something outside the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace coend
