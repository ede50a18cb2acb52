#include "mvdeg/error.hpp"

namespace mvdeg {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& msg)
    : Error(ErrorKind::Parse,
            source + ":" + std::to_string(line) + (column ? ":" + std::to_string(column) : std::string{}) + ": " + msg),
      line_(line),
      column_(column) {}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Io:
      return 1;
    case ErrorKind::Parse:
      return 2;
    case ErrorKind::Dimension:
      return 3;
    case ErrorKind::Degenerate:
    case ErrorKind::Factorization:
    case ErrorKind::Capacity:
    case ErrorKind::SizeCap:
    case ErrorKind::ScaleUndefined:
    case ErrorKind::EmptyPattern:
    case ErrorKind::Overflow:
      return 4;
  }
  return 1;
}

}  // namespace mvdeg
