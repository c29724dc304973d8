#pragma once

#include <stdexcept>
#include <string>

namespace alphaquota {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when unknown (JSON errors).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that breaks an instance/committee invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An exact search would exceed its configured enumeration or node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace alphaquota
