#pragma once

#include "preludec/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace preludec {

enum class Severity { Error, Warning };

// Stable machine-readable diagnostic codes.
namespace codes {
inline constexpr const char* ClockMismatch = "E_CLOCK_MISMATCH";
inline constexpr const char* Divisibility = "E_DIVISIBILITY";
inline constexpr const char* UndefinedFlow = "E_UNDEFINED_FLOW";
inline constexpr const char* MultipleDefinition = "E_MULTIPLE_DEFINITION";
inline constexpr const char* CausalityCycle = "E_CAUSALITY_CYCLE";
inline constexpr const char* BooleanFlowMisuse = "E_BOOLEAN_FLOW_MISUSE";
inline constexpr const char* Arity = "E_ARITY";
inline constexpr const char* ValueType = "E_VALUE_TYPE";
inline constexpr const char* NegativeStart = "W_NEGATIVE_START";
inline constexpr const char* Syntax = "E_SYNTAX";
inline constexpr const char* IllegalCharacter = "E_ILLEGAL_CHARACTER";
inline constexpr const char* InvalidClock = "E_INVALID_CLOCK";
inline constexpr const char* NonPositiveFactor = "E_NONPOSITIVE_FACTOR";
inline constexpr const char* NonIntegerShift = "E_NONINTEGER_SHIFT";
inline constexpr const char* NegativeShift = "E_NEGATIVE_SHIFT";
inline constexpr const char* DuplicateName = "E_DUPLICATE_NAME";
inline constexpr const char* UndeclaredFlow = "E_UNDECLARED_FLOW";
inline constexpr const char* UndefinedNode = "E_UNDEFINED_NODE";
inline constexpr const char* IllegalLhs = "E_ILLEGAL_LHS";
inline constexpr const char* RecursiveNode = "E_RECURSIVE_NODE";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string file;
  SourceLocation loc;
  // Clock renderings, present for clock mismatches.
  std::optional<std::string> expected;
  std::optional<std::string> actual;

  static Diagnostic error(std::string code, std::string message, std::string file,
                          SourceLocation loc);
  static Diagnostic warning(std::string code, std::string message, std::string file,
                            SourceLocation loc);
  Diagnostic&& with_clocks(std::string expected_clock, std::string actual_clock) &&;
};

enum class DiagnosticFormat { Human, Json };

bool has_errors(const std::vector<Diagnostic>& ds);

// Stable order: (file, line, col, code); equal keys keep insertion order.
void sort_diagnostics(std::vector<Diagnostic>& ds);

std::string render_diagnostic(const Diagnostic& d, bool color = false);
std::string render_diagnostics(const std::vector<Diagnostic>& ds, DiagnosticFormat format,
                               bool color = false);

}  // namespace preludec
