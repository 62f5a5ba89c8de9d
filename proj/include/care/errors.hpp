#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace care {

/// Bad input data: malformed files, empty graphs, unknown node ids.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed line in a text input; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::string detail, std::string source = {})
      : DataError((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(std::move(detail)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace care
