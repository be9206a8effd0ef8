#pragma once

#include <stdexcept>
#include <string>

namespace wcsf {

enum class ErrorCode {
  InvalidArgument,
  NotPositive,      // warp or base metric failed its positivity check
  Immersion,        // |gamma'| vanished at some node
  WrongManifold,    // operation requires the other warp kind
  Parse,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 1-based line of the offending key (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::Parse, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace wcsf
