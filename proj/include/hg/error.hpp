//===-- error.hpp - Diagnostics and error codes -----------------*- C++ -*-===//
//
// Hard failures are reported with hg::Error (code + message). Front-end
// problems (syntax, validation) are collected as Diagnostic lists instead.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hg {

struct SourceLoc {
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

struct SourceSpan {
  SourceLoc begin;
  SourceLoc end;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan location;

  bool is_error() const { return severity == Severity::Error; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << d.location.begin.line << ':' << d.location.begin.column << ": "
            << (d.is_error() ? "error" : "warning") << " [" << d.code << "] "
            << d.message;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.is_error()) return true;
  return false;
}

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace hg
