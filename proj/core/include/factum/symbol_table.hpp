#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factum/ast.hpp"
#include "factum/diagnostic.hpp"

namespace factum {

// A resolved sort: the data type that declares it plus its name.
struct SortId {
  std::string data_type;
  std::string sort;

  std::string qualified() const { return data_type + "." + sort; }
  auto operator<=>(const SortId&) const = default;
};

struct OperationEntry {
  std::string data_type;
  OperationSig sig;
};

struct PredicateEntry {
  std::string data_type;
  PredicateSig sig;
};

// Lookup maps over one pattern. Entries are copies, so the table does not
// borrow from the pattern it was built from. When a name is declared twice
// the first declaration wins and the duplicate is reported as E006.
struct SymbolTable {
  std::map<std::string, SortId, std::less<>> sorts;  // keyed by "DataType.Sort"
  std::map<std::string, OperationEntry, std::less<>> operations;  // "DataType.op"
  std::map<std::string, PredicateEntry, std::less<>> predicates;  // "DataType.pred"
  std::map<std::string, ComponentType, std::less<>> component_types;
  std::map<std::string, std::string, std::less<>> short_names;  // short name -> type name
  std::map<std::pair<std::string, std::string>, Port> ports;     // (type, port)
  std::vector<Diagnostic> diagnostics;

  const ComponentType* component_type(std::string_view name) const;
  const Port* port(std::string_view type, std::string_view port_name) const;
  const OperationEntry* operation(std::string_view qualified) const;
  const PredicateEntry* predicate(std::string_view qualified) const;
};

SymbolTable build_symbol_table(const Pattern& pattern);

struct SortResolution {
  std::optional<SortId> sort;
  // Set when an unqualified name matched sorts in several data types.
  bool ambiguous = false;
  // Every sort in scope, for quick fixes: sorts of the context data type by
  // their plain name, all others qualified, sorted lexicographically.
  std::vector<std::string> candidates;

  bool resolved() const { return sort.has_value(); }
};

// Qualified references resolve globally. Unqualified ones resolve within
// `context` (a data type name) first, then globally when exactly one data
// type declares the name. Candidates are filled only on failure.
SortResolution resolve_sort(const SortRef& ref, std::optional<std::string_view> context,
                            const SymbolTable& table);

// Candidate list as `resolve_sort` reports it on failure.
std::vector<std::string> sort_candidates(std::optional<std::string_view> context, const SymbolTable& table);

}  // namespace factum
