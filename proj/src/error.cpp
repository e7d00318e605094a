#include "markagg/error.hpp"

#include <atomic>
#include <iostream>

namespace markagg {
namespace {

void stderr_sink(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::atomic<WarningSink> g_sink{stderr_sink};

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnsupportedCost: return "UnsupportedCost";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AbsorbingState: return "AbsorbingState";
    case ErrorKind::InvalidRates: return "InvalidRates";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InequalityViolation: return "InequalityViolation";
  }
  return "Unknown";
}

void set_warning_sink(WarningSink sink) noexcept { g_sink.store(sink ? sink : stderr_sink); }

void warn(const std::string& message) { g_sink.load()(message); }

}  // namespace markagg
