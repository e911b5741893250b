#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cochranq {

/// Input text that does not follow one of the documented file layouts.
/// `line` and `column` are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Arguments that violate an operation's precondition (bad bounds, bad
/// probability vectors, mismatched inputs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cochranq
