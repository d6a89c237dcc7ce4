#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace koslinker {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input. Carries the source name and 1-based line
/// number when known (line 0 means "whole source").
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(format(source, line, message)), source_(std::move(source)), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line, const std::string& message) {
    if (line == 0) return source + ": " + message;
    return source + ":" + std::to_string(line) + ": " + message;
  }

  std::string source_;
  std::size_t line_;
};

/// A structurally valid input that violates a domain rule (e.g. a hierarchy
/// cycle, a K mismatch between a model and a classification).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace koslinker
