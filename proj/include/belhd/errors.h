#ifndef BELHD_ERRORS_H_
#define BELHD_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace belhd {

// Base class for every error raised by the library. The CLI maps these to
// exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input line. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input parsed but violates a semantic constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A lenient-mode KB entity was used where its invariant is required.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Operation not applicable to this input, e.g. species-based passes on a KB
// without a species column.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace belhd

#endif  // BELHD_ERRORS_H_
