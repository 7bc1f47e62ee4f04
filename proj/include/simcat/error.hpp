#pragma once

#include <stdexcept>
#include <string>

namespace simcat {

// Base of every error thrown by the library. The CLI maps the subclasses to
// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of operands do not agree (matrix product, apply, dot, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A function table, term, graph or gadget violates its structural invariants.
class MalformedError : public Error {
 public:
  using Error::Error;
};

// Ill-typed sequential composition of terms.
class TypeError : public Error {
 public:
  using Error::Error;
};

// Singular F_2 matrix passed where an invertible one is required.
class NotInvertibleError : public Error {
 public:
  using Error::Error;
};

// An exhaustive computation would exceed its configured bit cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A rewrite rule pattern does not match at the requested site.
class NoMatchError : public Error {
 public:
  using Error::Error;
};

// Arithmetic result is not representable (dyadic numerator overflow).
class OverflowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace simcat
