#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varschouten {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands were built over different field contexts.
class ContextMismatch : public Error {
 public:
  ContextMismatch() : Error("operands belong to different field contexts") {}
};

/// A grading-dependent operation received a density mixing parities.
class NonHomogeneous : public Error {
 public:
  explicit NonHomogeneous(const std::string& what)
      : Error(what + ": density is not parity-homogeneous; split it by parity first") {}
};

/// Construction rejected by an algebra invariant (odd function argument, bad jet order, ...).
class InvalidExpression : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace varschouten
