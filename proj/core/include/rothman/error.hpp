#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rothman {

enum class ErrorCode {
  parse,       // malformed input text
  validation,  // well-formed input violating an invariant
  domain,      // quantity undefined for the given arguments
  numerical,   // fitting or root finding failed
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message)
      : Error(ErrorCode::parse, "line " + std::to_string(line) +
                                    (field.empty() ? "" : ", field '" + field + "'") +
                                    ": " + message),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::validation, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorCode::domain, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCode::numerical, message) {}
};

}  // namespace rothman
