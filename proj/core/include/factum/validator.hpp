#pragma once

#include <optional>
#include <string>
#include <vector>

#include "factum/ast.hpp"
#include "factum/diagnostic.hpp"
#include "factum/symbol_table.hpp"

namespace factum {

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;  // sorted by position, then code
  bool ok = true;
};

// Individual checks. Each is total: constructs flagged by an earlier check
// are skipped rather than reported twice. Sub-patterns are not checked.
std::vector<Diagnostic> check_sorts(const Pattern& pattern, const SymbolTable& table);
std::vector<Diagnostic> check_signatures(const Pattern& pattern, const SymbolTable& table);
std::vector<Diagnostic> check_ports(const Pattern& pattern, const SymbolTable& table);
std::vector<Diagnostic> check_variables(const Pattern& pattern, const SymbolTable& table);

// Symbols, sorts, signatures, ports, variables; merged and sorted.
ValidationReport validate(const Pattern& pattern);

// Variables visible at a point inside a formula block: enclosing binders
// (innermost first) shadow the block's declarations.
class VariableScope {
 public:
  explicit VariableScope(const FormulaBlock& block) : block_(&block) {}

  // Null when the name is not declared at all. A binder without a target
  // yields a non-null entry with `target == nullptr`.
  struct Entry {
    const VariableTarget* target = nullptr;
    const Name* declared_at = nullptr;
  };
  std::optional<Entry> lookup(const std::string& name) const;

  void push(const Binder& binder) { binders_.push_back(&binder); }
  void pop() { binders_.pop_back(); }

 private:
  const FormulaBlock* block_;
  std::vector<const Binder*> binders_;
};

// Sort of a term under `scope`, or nullopt when it cannot be typed (an
// error that one of the checks reports).
std::optional<SortId> infer_sort(const Term& term, const VariableScope& scope, const SymbolTable& table);

}  // namespace factum
