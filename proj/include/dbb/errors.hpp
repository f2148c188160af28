#pragma once

#include <stdexcept>
#include <string>

namespace dbb {

// Common base so callers can catch everything from this library at once.
// The CLI maps the subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (bad n/d, index out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured cap would be exceeded (vertex cap, cycle cap).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A vertex sequence is not a walk / cycle of the given graph.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A vertex with out-degree zero where a sink-free graph is required.
class SinkError : public Error {
 public:
  using Error::Error;
};

// Horizon too short for the requested stationary-regime operation.
class HorizonError : public Error {
 public:
  using Error::Error;
};

// Graph is not out-regular where a regular graph is required.
class RegularityError : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic left the representable range, or division by zero.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// An internal cross-check failed; indicates a bug, not bad input.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Carries a 1-based line number when known.
class ParseError : public Error {
 public:
  using Error::Error;
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

}  // namespace dbb
