#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subgoal {

// Base for every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid suite/CLI/eval configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed text. `position` is a byte offset into the parsed input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position = 0, std::string raw = {})
      : Error(what), position_(position), raw_(std::move(raw)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::size_t position_;
  std::string raw_;
};

// Dataset or replay inconsistency (e.g. an expert trajectory that no longer
// reproduces its score trace).
class DataError : public Error {
 public:
  using Error::Error;
};

// Suite content that cannot be solved by the expert planner.
class AuthoringError : public Error {
 public:
  using Error::Error;
};

// Transport-level failure talking to a model endpoint. Retryable.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

class AnnotationError : public Error {
 public:
  using Error::Error;
};

class PolicyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace subgoal
