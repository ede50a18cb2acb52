#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvdeg {

/// Failure categories. Each maps onto one CLI exit code (see exit_code()).
enum class ErrorKind {
  InvalidArgument,   // bad parameter value (usage)
  Parse,             // malformed input file
  Dimension,         // shape mismatch between inputs
  Degenerate,        // zero-variance channel, zero baseline, ...
  Factorization,     // correlation matrix is not PSD
  Capacity,          // classical baseline refused: too many patterns
  SizeCap,           // dense oracle path asked for too large a matrix
  ScaleUndefined,    // coarse-grained length too short
  EmptyPattern,      // no embedding vector survived masking
  Overflow,          // integer arithmetic would wrap
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with 1-based position (column 0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ScaleUndefinedError : public Error {
 public:
  ScaleUndefinedError(int tau, const std::string& msg) : Error(ErrorKind::ScaleUndefined, msg), tau_(tau) {}
  int tau() const noexcept { return tau_; }

 private:
  int tau_;
};

/// Raised by the classical baseline when the pattern count exceeds the cap.
/// The count is kept as a decimal string since it may exceed 64 bits.
class CapacityError : public Error {
 public:
  CapacityError(std::string pattern_count, const std::string& msg)
      : Error(ErrorKind::Capacity, msg), count_(std::move(pattern_count)) {}
  const std::string& pattern_count() const noexcept { return count_; }

 private:
  std::string count_;
};

class FactorizationError : public Error {
 public:
  FactorizationError(int minor, const std::string& msg) : Error(ErrorKind::Factorization, msg), minor_(minor) {}
  /// 1-based order of the first leading minor that failed.
  int minor() const noexcept { return minor_; }

 private:
  int minor_;
};

/// Exit code map: 0 ok, 1 usage, 2 parse, 3 dimension, 4 numeric/degenerate.
int exit_code(ErrorKind kind) noexcept;

}  // namespace mvdeg
