#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace factum {

// Byte offset/length plus a 1-based line and code-point column.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  std::size_t end() const { return offset + length; }
};

// Smallest span covering both arguments.
Span merge(const Span& first, const Span& last);

enum class Severity { Error, Warning };

// Stable diagnostic codes. Messages may be reworded; codes may not.
namespace codes {
inline constexpr std::string_view UnresolvedSort = "E001";
inline constexpr std::string_view ArityMismatch = "E002";
inline constexpr std::string_view SortMismatch = "E003";
inline constexpr std::string_view UnknownPort = "E004";
inline constexpr std::string_view UndeclaredName = "E005";
inline constexpr std::string_view DuplicateName = "E006";
inline constexpr std::string_view InvalidConnects = "E007";
inline constexpr std::string_view ConnDirection = "E008";
inline constexpr std::string_view UndeclaredConnection = "W001";
inline constexpr std::string_view Syntax = "P001";
inline constexpr std::string_view Lexical = "P002";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string file;
  Span span;
  std::string message;
  // Replacement texts offered as quick fixes, in presentation order.
  std::vector<std::string> suggestions;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Orders by file position, then code. Stable for equal keys.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

// `<file>:<line>:<col>: <severity>[<code>]: <message>` followed by one
// indented `fix: <suggestion>` line per suggestion. Each line ends in '\n'.
std::string render(const Diagnostic& diagnostic);
std::string render(const std::vector<Diagnostic>& diagnostics);

}  // namespace factum
