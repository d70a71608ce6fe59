#include "factum/symbol_table.hpp"

#include <algorithm>
#include <set>

namespace factum {

const ComponentType* SymbolTable::component_type(std::string_view name) const {
  auto it = component_types.find(name);
  return it == component_types.end() ? nullptr : &it->second;
}

const Port* SymbolTable::port(std::string_view type, std::string_view port_name) const {
  auto it = ports.find({std::string(type), std::string(port_name)});
  return it == ports.end() ? nullptr : &it->second;
}

const OperationEntry* SymbolTable::operation(std::string_view qualified) const {
  auto it = operations.find(qualified);
  return it == operations.end() ? nullptr : &it->second;
}

const PredicateEntry* SymbolTable::predicate(std::string_view qualified) const {
  auto it = predicates.find(qualified);
  return it == predicates.end() ? nullptr : &it->second;
}

namespace {

Diagnostic duplicate(const Pattern& pattern, const Name& name, std::string_view what) {
  Diagnostic d;
  d.code = std::string(codes::DuplicateName);
  d.file = pattern.source;
  d.span = name.span;
  d.message = "Duplicate " + std::string(what) + " '" + name.text + "'.";
  return d;
}

}  // namespace

SymbolTable build_symbol_table(const Pattern& pattern) {
  SymbolTable table;
  std::set<std::string> data_types;
  for (const auto& dt : pattern.data_types) {
    if (!data_types.insert(dt.name.text).second) {
      table.diagnostics.push_back(duplicate(pattern, dt.name, "data type"));
      continue;
    }
    for (const auto& sort : dt.sorts) {
      const std::string key = dt.name.text + "." + sort.text;
      if (!table.sorts.emplace(key, SortId{dt.name.text, sort.text}).second) {
        table.diagnostics.push_back(duplicate(pattern, sort, "sort"));
      }
    }
    std::set<std::string> members;
    for (const auto& op : dt.operations) {
      if (!members.insert(op.name.text).second) {
        table.diagnostics.push_back(duplicate(pattern, op.name, "operation or predicate"));
        continue;
      }
      table.operations.emplace(dt.name.text + "." + op.name.text, OperationEntry{dt.name.text, op});
    }
    for (const auto& pred : dt.predicates) {
      if (!members.insert(pred.name.text).second) {
        table.diagnostics.push_back(duplicate(pattern, pred.name, "operation or predicate"));
        continue;
      }
      table.predicates.emplace(dt.name.text + "." + pred.name.text, PredicateEntry{dt.name.text, pred});
    }
  }

  for (const auto& ct : pattern.component_types) {
    if (table.component_types.count(ct.name.text)) {
      table.diagnostics.push_back(duplicate(pattern, ct.name, "component type"));
      continue;
    }
    if (!table.short_names.emplace(ct.short_name.text, ct.name.text).second) {
      table.diagnostics.push_back(duplicate(pattern, ct.short_name, "component type short name"));
    }
    table.component_types.emplace(ct.name.text, ct);
    for (const auto* list : {&ct.input_ports, &ct.output_ports}) {
      for (const auto& port : *list) {
        if (!table.ports.emplace(std::make_pair(ct.name.text, port.name.text), port).second) {
          table.diagnostics.push_back(duplicate(pattern, port.name, "port"));
        }
      }
    }
  }
  sort_diagnostics(table.diagnostics);
  return table;
}

std::vector<std::string> sort_candidates(std::optional<std::string_view> context, const SymbolTable& table) {
  std::vector<std::string> out;
  out.reserve(table.sorts.size());
  for (const auto& [key, id] : table.sorts) {
    out.push_back(context && id.data_type == *context ? id.sort : key);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SortResolution resolve_sort(const SortRef& ref, std::optional<std::string_view> context,
                            const SymbolTable& table) {
  SortResolution result;
  if (ref.qualifier) {
    auto it = table.sorts.find(ref.qualifier->text + "." + ref.sort.text);
    if (it != table.sorts.end()) {
      result.sort = it->second;
      return result;
    }
  } else {
    if (context) {
      auto it = table.sorts.find(std::string(*context) + "." + ref.sort.text);
      if (it != table.sorts.end()) {
        result.sort = it->second;
        return result;
      }
    }
    std::vector<SortId> matches;
    for (const auto& [key, id] : table.sorts) {
      if (id.sort == ref.sort.text) {
        matches.push_back(id);
      }
    }
    if (matches.size() == 1) {
      result.sort = matches.front();
      return result;
    }
    result.ambiguous = matches.size() > 1;
  }
  result.candidates = sort_candidates(context, table);
  return result;
}

}  // namespace factum
