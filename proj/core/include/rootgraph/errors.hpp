#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rootgraph {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A rule or program that parsed but violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Misuse of the engine's internal contracts (invalid ids, dangling deletes, non-LIFO scopes).
class EngineFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A loop exceeded its iteration cap.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The final graph does not encode a binary search tree.
class MalformedTree : public Error {
 public:
  using Error::Error;
};

}  // namespace rootgraph
