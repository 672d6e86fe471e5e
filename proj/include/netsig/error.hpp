#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netsig {

enum class ErrorCode {
  InvalidArgument = 1,
  Io = 2,
  Parse = 3,
  Numeric = 4,
  Degenerate = 5,
};

// Base of every exception thrown by the library. The C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class NumericFailure : public Error {
public:
  NumericFailure(std::size_t iteration, const std::string& what)
      : Error(ErrorCode::Numeric, what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

private:
  std::size_t iteration_;
};

// A reference component carries energy but its degraded counterpart is
// identically zero, so no normalization factor exists.
class DegenerateComponent : public Error {
public:
  explicit DegenerateComponent(std::size_t component)
      : Error(ErrorCode::Degenerate,
              "degraded component " + std::to_string(component) + " is zero but its reference is not"),
        component_(component) {}
  std::size_t component() const noexcept { return component_; }

private:
  std::size_t component_;
};

}  // namespace netsig
