#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pstlab {

// Root of everything the library throws. The CLI maps the concrete type to
// an exit code, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSizeError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// A requested object would exceed the configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}

  // 1-based; 0 when the position is unknown.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class AsymmetryError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised when a structural invariant that should hold by construction does
// not (e.g. a deleted path power with the wrong component count).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace pstlab
