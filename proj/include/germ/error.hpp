#pragma once

#include <stdexcept>
#include <string>

namespace germ {

// Numeric values are part of the C API (see germ.h).
enum class ErrorCode {
  Syntax = 1,
  Semantic = 2,      // object fails its defining invariant
  Mismatch = 3,      // ring / field / space mismatch
  Domain = 4,        // operation undefined for these inputs (e.g. char p exp)
  Unsupported = 5,
  CapExceeded = 6,
  Obstruction = 7,   // jet-level obstruction during descent
  Io = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with a 1-based position in the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::Syntax, what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace germ
