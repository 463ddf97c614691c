#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commscape {

/// Malformed input text. `line()` is 1-based; 0 when the location is unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out = "parse error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A node id (or other key) that is not present in the container it was looked up in.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Violated precondition on a caller-supplied argument.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace commscape
