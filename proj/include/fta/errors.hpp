#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fta {

/// Malformed input to an operation: unknown symbol, arity mismatch, bad state.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bound or parameter outside what an operation supports.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The regenerate-until-trim loop ran out of attempts.
class ExhaustionError : public std::runtime_error {
 public:
  ExhaustionError(std::size_t n, double d2, std::size_t attempts);

  std::size_t n() const { return n_; }
  double d2() const { return d2_; }
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t n_;
  double d2_;
  std::size_t attempts_;
};

/// Subset construction exceeded its state budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peak fit needs at least three positive-weight points.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in an FTA document, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace fta
