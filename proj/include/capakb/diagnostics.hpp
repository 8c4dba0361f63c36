#pragma once

#include <optional>
#include <string>
#include <vector>

namespace capakb {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;  // characters
  bool operator==(const SourceSpan&) const = default;
};

enum class Severity : int { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::optional<SourceSpan> span;  // always set by the parsers

  bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

std::string format_diagnostic(const Diagnostic& d);

}  // namespace capakb
