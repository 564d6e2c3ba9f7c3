#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roughkit {

/// Base class for every data-dependent failure raised by the library.
/// The CLI maps anything derived from it to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class InsufficientExtentError : public Error {
 public:
  using Error::Error;
};

class EmptyMapError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Zero variance or too few shared cells; never reported as r = 0.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class InputSetError : public Error {
 public:
  using Error::Error;
};

}  // namespace roughkit
