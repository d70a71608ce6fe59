#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "factum/ast.hpp"
#include "factum/diagnostic.hpp"

namespace factum {

struct ParseResult {
  // Present iff no error-severity syntax diagnostics were produced.
  std::optional<Pattern> pattern;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return pattern.has_value(); }
};

// Parses a whole `.pmodel` document. Total: never throws on malformed
// input; on error it reports, skips to the next section keyword and keeps
// going so one run yields as many diagnostics as possible.
ParseResult parse_pattern(std::string_view text, std::string_view file = "<input>");

// What a standalone formula may refer to: the enclosing block's variable
// declarations (for unannotated binders) and the component type names
// (to classify unqualified binder annotations).
struct FormulaScope {
  std::vector<VariableDecl> variables;
  std::set<std::string, std::less<>> component_types;
};

struct FormulaParseResult {
  FormulaPtr formula;  // null on syntax error
  std::vector<Diagnostic> diagnostics;
};

// Operator precedence, tightest first: atoms and parentheses, `¬`, `∧`,
// `∨`, `⇒` (right-associative), `W` (right-associative). `G`, `∀` and `∃`
// are prefix operators whose body is the maximal formula to their right.
FormulaParseResult parse_formula(std::string_view text, const FormulaScope& scope = {},
                                 std::string_view file = "<input>");

}  // namespace factum
