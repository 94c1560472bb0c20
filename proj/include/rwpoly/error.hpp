#pragma once

#include <stdexcept>
#include <string>

namespace rwpoly {

enum class ErrorKind {
  InvalidArgument,    // bad parameter values (alpha, eps, r, ...)
  DimensionMismatch,
  Parse,              // malformed input file
  NegativeWeight,
  Asymmetric,
  InvalidMatrix,      // SDDM / Laplacian structure violated
  ThresholdExceeded,  // dense oracle size guard
  Disconnected,
  Bipartite,
  Refused,            // input the algorithm declines to process
  NotConverged,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure tied to a 1-based line number of the input file.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace rwpoly
