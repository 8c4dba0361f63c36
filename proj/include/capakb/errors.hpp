#pragma once

#include <stdexcept>
#include <string>

namespace capakb {

// Programmatic misuse and engine aborts. Parse/validation problems are
// reported as Diagnostic values instead, never thrown.
class KbError : public std::runtime_error {
public:
  explicit KbError(const std::string& message) : std::runtime_error(message) {}
};

// Raised when a fixpoint run exceeds its iteration cap.
class IterationLimitError : public KbError {
public:
  explicit IterationLimitError(const std::string& message) : KbError(message) {}
};

}  // namespace capakb
