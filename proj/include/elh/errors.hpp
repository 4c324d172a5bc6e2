#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the text-format reader; carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class TerminologyError : public Error {
 public:
  using Error::Error;
};

class StructuralError : public Error {
 public:
  using Error::Error;
};

class UnsupportedQueryError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Input data that no admissible target can explain.
class DataError : public Error {
 public:
  using Error::Error;
};

// Thrown when a learner exhausts its oracle-call budget. The partial
// hypothesis is kept in text form so callers can still report it.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& message, std::string partialHypothesis)
      : Error(message), partial_(std::move(partialHypothesis)) {}

  const std::string& partialHypothesis() const { return partial_; }

 private:
  std::string partial_;
};

}  // namespace elh
