#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strongeq {

// Malformed rule text. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  enum class Kind { Syntax, EmptyToken };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        kind_(kind), line_(line), column_(column) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

// A brute-force procedure was asked to work over more atoms than its guard allows.
class GuardError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An input violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace strongeq
