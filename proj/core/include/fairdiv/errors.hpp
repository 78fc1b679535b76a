#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidValueSet : public Error {
 public:
  using Error::Error;
};

class InvalidAllocation : public Error {
 public:
  using Error::Error;
};

// Malformed source object (CNF occurrence counts, graph degrees, cover
// multiplicities, parameter ranges of a reduction's source).
class InvalidSource : public Error {
 public:
  using Error::Error;
};

// Witness data that does not certify the source (unsatisfied clause,
// uncovered edge, non-exact cover).
class InvalidWitness : public Error {
 public:
  using Error::Error;
};

// Value triple outside the regime a construction or bound requires.
class WrongRegime : public Error {
 public:
  using Error::Error;
};

// Nash welfare requested on an instance with negatively valued items.
class ObjectiveUndefined : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

// Syntax error in a text format; carries the 1-based line (or a path for
// structured documents) of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message), line_(0) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace fairdiv
