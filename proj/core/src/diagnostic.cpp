#include "factum/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace factum {

Span merge(const Span& first, const Span& last) {
  if (last.end() <= first.offset) {
    return first;
  }
  Span out = first;
  out.length = std::max(first.end(), last.end()) - first.offset;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.file, a.span.offset, a.code) <
                            std::tie(b.file, b.span.offset, b.code);
                   });
}

std::string render(const Diagnostic& diagnostic) {
  std::string out;
  out += diagnostic.file.empty() ? std::string("<input>") : diagnostic.file;
  out += ':' + std::to_string(diagnostic.span.line) + ':' + std::to_string(diagnostic.span.column) +
         ": ";
  out += diagnostic.severity == Severity::Error ? "error" : "warning";
  out += '[' + diagnostic.code + "]: " + diagnostic.message + '\n';
  for (const auto& suggestion : diagnostic.suggestions) {
    out += "    fix: " + suggestion + '\n';
  }
  return out;
}

std::string render(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += render(d);
  }
  return out;
}

}  // namespace factum
