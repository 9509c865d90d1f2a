#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discocat {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SemiringMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t required, std::size_t budget)
      : Error("allocation budget exceeded: " + std::to_string(required) +
              " scalars required, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

// Malformed input file or text. `line` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A token that does not resolve against the vocabulary.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

// Pronoun where only pronoun-free phrases are accepted, bad constraint, etc.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace discocat
