#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace euslem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& bare_message() const noexcept { return bare_; }

 private:
  std::string bare_;
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a semantic constraint (unknown lemma,
/// closed guesser category, misaligned corpora, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace euslem
