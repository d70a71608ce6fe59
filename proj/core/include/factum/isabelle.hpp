#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "factum/ast.hpp"

namespace factum {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kDefaultIsabelleImport = "DynamicArchitectures";

struct TheoryOptions {
  std::string import_theory = std::string(kDefaultIsabelleImport);
  // Emit symbols as Unicode (∈, λ, □⇩c) instead of `\<in>`-style escapes.
  bool unicode = false;
};

// `FACTUM_ISABELLE_IMPORT` if set and non-empty, else the default.
std::string import_from_environment();

// Isabelle identifiers derived from the pattern. For a component type with
// short name S and port q: `Sactive`, `Scmp`, `Sq`, type variables `'Sid`
// and `'Scmp`, connection predicates `conn_Sq_Tr`. Operations and
// predicates become `DataType_name`, sorts keep their own name.
class NameMangling {
 public:
  // Throws GenerationError if two derived names coincide.
  explicit NameMangling(const Pattern& pattern);

  std::string active(std::string_view type) const;
  std::string component(std::string_view type) const;
  std::string port(std::string_view type, std::string_view port) const;
  std::string id_type(std::string_view type) const;
  std::string component_type(std::string_view type) const;
  std::string connection(std::string_view from_type, std::string_view from_port, std::string_view to_type,
                         std::string_view to_port) const;
  std::string function(std::string_view qualified) const;  // operations and predicates
  std::string sort(std::string_view qualified) const;

 private:
  std::string short_name(std::string_view type) const;

  std::map<std::string, std::string, std::less<>> short_names_;
  std::map<std::string, std::string, std::less<>> sorts_;
};

// Expression for a formula in the dynamic-architecture calculus, using
// ASCII escapes. Variables are typed through `block`.
std::string translate_formula(const Formula& formula, const FormulaBlock& block, const NameMangling& names);

// Whole theory text. Requires a pattern that validates.
std::string generate_theory(const Pattern& pattern, const TheoryOptions& options = {});

// Replaces `\<name>` escapes that have a standard Unicode rendering.
std::string to_unicode(std::string_view ascii);

struct GoldenReport {
  bool match = false;
  std::string diff;  // unified diff, empty on match
};

// Compares the generated theory byte for byte against `golden_path`.
// Throws GenerationError if the file cannot be read.
GoldenReport golden_compare(const Pattern& pattern, const std::string& golden_path, const TheoryOptions& options = {});

// Line-based unified diff with three lines of context.
std::string unified_diff(std::string_view expected, std::string_view actual, std::string_view expected_name = "expected",
                         std::string_view actual_name = "actual");

}  // namespace factum
