#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ts {

// Base for all toolkit errors. CLI maps subclasses to stable exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A domain invariant was violated (score out of range, bad judgment set, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A prediction table does not cover every ground-truth triple.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& msg, std::vector<std::string> missing)
      : Error(msg), missing_(std::move(missing)) {}

  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// A measure has no defined value on the given input (e.g. TAU with no
// groups of size >= 2).
class UndefinedMeasureError : public Error {
 public:
  using Error::Error;
};

// Training cannot produce a usable model (empty data, no features).
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace ts
