#include "preludec/diagnostic.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace preludec {

Diagnostic Diagnostic::error(std::string code, std::string message, std::string file,
                             SourceLocation loc) {
  return Diagnostic{Severity::Error, std::move(code), std::move(message), std::move(file), loc,
                    std::nullopt, std::nullopt};
}

Diagnostic Diagnostic::warning(std::string code, std::string message, std::string file,
                               SourceLocation loc) {
  return Diagnostic{Severity::Warning, std::move(code), std::move(message), std::move(file), loc,
                    std::nullopt, std::nullopt};
}

Diagnostic&& Diagnostic::with_clocks(std::string expected_clock, std::string actual_clock) && {
  expected = std::move(expected_clock);
  actual = std::move(actual_clock);
  return std::move(*this);
}

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diagnostics(std::vector<Diagnostic>& ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.file, a.loc.line, a.loc.col, a.code) <
           std::tie(b.file, b.loc.line, b.loc.col, b.code);
  });
}

namespace {

const char* severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

}  // namespace

std::string render_diagnostic(const Diagnostic& d, bool color) {
  const char* tint = d.severity == Severity::Error ? "\x1b[31m" : "\x1b[35m";
  std::ostringstream out;
  out << d.file << ':' << d.loc.line << ':' << d.loc.col << ": ";
  if (color) out << tint;
  out << severity_name(d.severity) << '[' << d.code << ']';
  if (color) out << "\x1b[0m";
  out << ": " << d.message;
  if (d.expected && d.actual) {
    out << " (expected " << *d.expected << ", actual " << *d.actual << ')';
  }
  return out.str();
}

std::string render_diagnostics(const std::vector<Diagnostic>& ds, DiagnosticFormat format,
                               bool color) {
  if (format == DiagnosticFormat::Human) {
    std::string out;
    for (const Diagnostic& d : ds) {
      out += render_diagnostic(d, color);
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Diagnostic& d : ds) {
    nlohmann::ordered_json obj;
    obj["severity"] = severity_name(d.severity);
    obj["code"] = d.code;
    obj["message"] = d.message;
    obj["file"] = d.file;
    obj["line"] = d.loc.line;
    obj["col"] = d.loc.col;
    obj["expected"] = d.expected ? nlohmann::ordered_json(*d.expected) : nullptr;
    obj["actual"] = d.actual ? nlohmann::ordered_json(*d.actual) : nullptr;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace preludec
