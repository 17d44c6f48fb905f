#ifndef LIESYS_ERRORS_HPP
#define LIESYS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liesys {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad syntax, unknown identifiers, inconsistent config.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Syntax error with source position (1-based line/column).
class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : InputError(msg + " at line " + std::to_string(line) + ", column " +
                   std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Two values were combined over different variable lists.
class VariableMismatchError : public InputError {
 public:
  using InputError::InputError;
};

/// Evaluation left the domain of a time expression (division by zero,
/// square root of a negative value) at a concrete time.
class DomainError : public Error {
 public:
  DomainError(const std::string& msg, double t)
      : Error(msg + " at t = " + std::to_string(t)), t_(t) {}

  double at_time() const { return t_; }

 private:
  double t_;
};

/// Numerical procedure failed: singular fit, pole inside a window,
/// non-generic solution set, integrator breakdown surfaced as an error.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace liesys

#endif  // LIESYS_ERRORS_HPP
