#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tracekit {

/// A half-open region of a source file, 1-based line and column.
struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Warning, Error };

inline const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

/// Diagnostic codes emitted by the frontend. Stable contract: codes match
/// P[0-9]{3} and are safe to key tooling on.
namespace diag {
inline constexpr const char* InvalidCharacter = "P001";
inline constexpr const char* UnterminatedString = "P002";
inline constexpr const char* MalformedNumber = "P003";
inline constexpr const char* InvalidEscape = "P004";
inline constexpr const char* UnknownRuleInAllow = "P005";
inline constexpr const char* DanglingSuppression = "P006";
inline constexpr const char* UnexpectedToken = "P010";
inline constexpr const char* UnknownAttribute = "P011";
inline constexpr const char* MissingAttribute = "P012";
inline constexpr const char* DuplicateAttribute = "P013";
inline constexpr const char* TypeMismatch = "P014";
inline constexpr const char* InvalidValue = "P015";
inline constexpr const char* DuplicateId = "P020";
inline constexpr const char* UnknownReference = "P021";
inline constexpr const char* DuplicateLink = "P022";
inline constexpr const char* CyclicParentChain = "P023";
inline constexpr const char* SelfLink = "P024";
inline constexpr const char* InvalidField = "P025";
}  // namespace diag

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
  std::string code;  // P[0-9]{3}
};

/// Renders one diagnostic as `file:line:col: severity[code]: message`.
inline std::string render_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream out;
  out << d.span.file << ':' << d.span.line << ':' << d.span.column << ": "
      << severity_name(d.severity) << '[' << d.code << "]: " << d.message;
  return out.str();
}

inline bool has_errors(const std::vector<ParseDiagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

}  // namespace tracekit
