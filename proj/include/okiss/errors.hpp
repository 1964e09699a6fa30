#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace okiss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or schema disagreement between operands.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Non-finite inputs, singular covariances, failed factorizations.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InsufficientConstraints : public Error {
 public:
  InsufficientConstraints() : Error("insufficient constraints") {}
};

// A value outside the documented domain of an estimator or config field.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace okiss
