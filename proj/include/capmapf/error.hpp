#pragma once

#include <stdexcept>
#include <string>

namespace capmapf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Some agent cannot reach its goal at all.
class UnsolvableError : public Error {
 public:
  using Error::Error;
};

// The goal is farther than the requested horizon.
class EmptyMddError : public Error {
 public:
  using Error::Error;
};

}  // namespace capmapf
