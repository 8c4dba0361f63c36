#include "capakb/diagnostics.hpp"

#include <sstream>

namespace capakb {

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  if (d.span)
    out << d.span->line << ":" << d.span->column << ": ";
  out << (d.severity == Severity::Error ? "error: " : "warning: ");
  out << d.message;
  return out.str();
}

}  // namespace capakb
