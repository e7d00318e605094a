#pragma once

#include <stdexcept>
#include <string>

namespace markagg {

enum class ErrorKind {
  NotIrreducible,
  SupportViolation,
  WindowTooLarge,
  InvalidConfig,
  UnsupportedCost,
  TooLarge,
  DimensionMismatch,
  AbsorbingState,
  InvalidRates,
  EmptyText,
  ParseError,
  InvalidArgument,
  InequalityViolation,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Emits a non-fatal diagnostic (stderr by default). Tests may install a sink.
using WarningSink = void (*)(const std::string&);
void set_warning_sink(WarningSink sink) noexcept;
void warn(const std::string& message);

}  // namespace markagg
