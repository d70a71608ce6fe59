#include "factum/validator.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace factum {

std::optional<VariableScope::Entry> VariableScope::lookup(const std::string& name) const {
  for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
    if ((*it)->name.text == name) {
      return Entry{(*it)->target ? &*(*it)->target : nullptr, &(*it)->name};
    }
  }
  if (const auto* decl = block_->find_variable(name)) {
    return Entry{&decl->target, &decl->name};
  }
  return std::nullopt;
}

namespace {

Diagnostic make(const Pattern& pattern, std::string_view code, const Span& span, std::string message,
                Severity severity = Severity::Error) {
  Diagnostic d;
  d.severity = severity;
  d.code = std::string(code);
  d.file = pattern.source;
  d.span = span;
  d.message = std::move(message);
  return d;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Pre-order walk over every formula node of a block, maintaining the
// binder scope. `visit` sees each node with the scope in effect at it.
void walk(const Formula& f, VariableScope& scope,
          const std::function<void(const Formula&, const VariableScope&)>& visit) {
  visit(f, scope);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Negation>) {
          walk(*x.operand, scope, visit);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk(*x.lhs, scope, visit);
          walk(*x.rhs, scope, visit);
        } else if constexpr (std::is_same_v<T, Globally>) {
          walk(*x.body, scope, visit);
        } else if constexpr (std::is_same_v<T, Quantified>) {
          scope.push(x.binder);
          walk(*x.body, scope, visit);
          scope.pop();
        }
      },
      f.node);
}

template <typename Visit>
void for_each_block(const Pattern& pattern, Visit&& visit) {
  for (const auto* block : {pattern.arch_spec ? &*pattern.arch_spec : nullptr,
                            pattern.arch_guarantee ? &*pattern.arch_guarantee : nullptr}) {
    if (block) {
      visit(*block);
    }
  }
}

template <typename Visit>
void for_each_node(const Pattern& pattern, Visit&& visit) {
  for_each_block(pattern, [&](const FormulaBlock& block) {
    for (const auto& lf : block.formulas) {
      VariableScope scope(block);
      walk(*lf.formula, scope, visit);
    }
  });
}

// Every term that occurs directly in an atom, paired with nothing else;
// nested function arguments are reached through `for_each_subterm`.
template <typename Visit>
void for_each_atom_term(const Formula& f, Visit&& visit) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValAtom>) {
          visit(x.value);
        } else if constexpr (std::is_same_v<T, TermEqAtom>) {
          visit(x.lhs);
          visit(x.rhs);
        } else if constexpr (std::is_same_v<T, PredicateAtom>) {
          for (const auto& a : x.args) {
            visit(a);
          }
        }
      },
      f.node);
}

void for_each_subterm(const Term& t, const std::function<void(const Term&)>& visit) {
  visit(t);
  if (const auto* app = std::get_if<FunctionApp>(&t.node)) {
    for (const auto& a : app->args) {
      for_each_subterm(a, visit);
    }
  }
}

// Component type of a variable, or null when it is undeclared, untyped or
// ranges over data.
const ComponentType* component_of(const VarUse& var, const VariableScope& scope, const SymbolTable& table) {
  auto entry = scope.lookup(var.name.text);
  if (!entry || !entry->target || !entry->target->is_component()) {
    return nullptr;
  }
  return table.component_type(entry->target->ref.sort.text);
}

std::optional<SortId> port_sort(const Port& port, const SymbolTable& table) {
  return resolve_sort(port.sort, std::nullopt, table).sort;
}

std::vector<std::string> port_names(const ComponentType& ct) {
  std::vector<std::string> names;
  for (const auto* list : {&ct.input_ports, &ct.output_ports}) {
    for (const auto& p : *list) {
      names.push_back(p.name.text);
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

std::optional<SortId> infer_sort(const Term& term, const VariableScope& scope, const SymbolTable& table) {
  return std::visit(
      [&](const auto& x) -> std::optional<SortId> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PortRead>) {
          const auto* ct = component_of(x.var, scope, table);
          const auto* port = ct ? ct->find_port(x.port.text) : nullptr;
          return port ? port_sort(*port, table) : std::nullopt;
        } else if constexpr (std::is_same_v<T, IdRead>) {
          const auto* ct = component_of(x.var, scope, table);
          if (!ct || !ct->id_sort) {
            return std::nullopt;
          }
          return resolve_sort(*ct->id_sort, std::nullopt, table).sort;
        } else if constexpr (std::is_same_v<T, DataVar>) {
          auto entry = scope.lookup(x.var.name.text);
          if (!entry || !entry->target || entry->target->is_component()) {
            return std::nullopt;
          }
          return resolve_sort(entry->target->ref, std::nullopt, table).sort;
        } else {
          const auto* op = table.operation(x.function.spelling());
          if (!op) {
            return std::nullopt;
          }
          return resolve_sort(op->sig.result_sort, op->data_type, table).sort;
        }
      },
      term.node);
}

std::vector<Diagnostic> check_sorts(const Pattern& pattern, const SymbolTable& table) {
  std::vector<Diagnostic> out;
  auto check = [&](const SortRef& ref, std::optional<std::string_view> context) {
    auto r = resolve_sort(ref, context, table);
    if (r.resolved()) {
      return;
    }
    auto d = make(pattern, codes::UnresolvedSort, ref.span,
                  "Couldn't resolve reference to Sort " + quote(ref.spelling()) + ".");
    d.suggestions = std::move(r.candidates);
    out.push_back(std::move(d));
  };
  for (const auto& dt : pattern.data_types) {
    for (const auto& op : dt.operations) {
      for (const auto& s : op.arg_sorts) {
        check(s, dt.name.text);
      }
      check(op.result_sort, dt.name.text);
    }
    for (const auto& pred : dt.predicates) {
      for (const auto& s : pred.arg_sorts) {
        check(s, dt.name.text);
      }
    }
  }
  for (const auto& ct : pattern.component_types) {
    if (ct.id_sort) {
      check(*ct.id_sort, std::nullopt);
    }
    for (const auto* list : {&ct.input_ports, &ct.output_ports}) {
      for (const auto& p : *list) {
        check(p.sort, std::nullopt);
      }
    }
  }
  for_each_block(pattern, [&](const FormulaBlock& block) {
    for (const auto& v : block.variables) {
      if (!v.target.is_component()) {
        check(v.target.ref, std::nullopt);
      }
    }
  });
  for_each_node(pattern, [&](const Formula& f, const VariableScope&) {
    if (const auto* q = std::get_if<Quantified>(&f.node)) {
      if (q->binder.annotated && q->binder.target && !q->binder.target->is_component()) {
        check(q->binder.target->ref, std::nullopt);
      }
    }
  });
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_signatures(const Pattern& pattern, const SymbolTable& table) {
  std::vector<Diagnostic> out;

  auto mismatch = [&](const Span& span, const std::string& what, const SortId& got, const SortId& want) {
    out.push_back(make(pattern, codes::SortMismatch, span,
                       what + " has sort " + quote(got.qualified()) + " but " + quote(want.qualified()) +
                           " is expected."));
  };

  // Arity and argument sorts of a function or predicate application.
  auto check_args = [&](const std::vector<Term>& args, const std::vector<SortRef>& params,
                        const std::string& data_type, const std::string& callee, const Span& span,
                        const VariableScope& scope) {
    if (args.size() != params.size()) {
      out.push_back(make(pattern, codes::ArityMismatch, span,
                         quote(callee) + " is declared to take " + std::to_string(params.size()) +
                             " argument" + (params.size() == 1 ? "" : "s") + " but is applied to " +
                             std::to_string(args.size()) + "."));
      return;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto want = resolve_sort(params[i], data_type, table).sort;
      auto got = infer_sort(args[i], scope, table);
      if (want && got && *want != *got) {
        mismatch(args[i].span, "Argument " + std::to_string(i + 1) + " of " + quote(callee), *got, *want);
      }
    }
  };

  // Use of a variable where a component is required.
  auto expect_component = [&](const VarUse& var, const VariableScope& scope) {
    auto entry = scope.lookup(var.name.text);
    if (entry && entry->target && !entry->target->is_component()) {
      out.push_back(make(pattern, codes::SortMismatch, var.name.span,
                         "Data variable " + quote(var.name.text) + " is used where a component is expected."));
      return false;
    }
    return entry && entry->target;
  };

  auto check_term = [&](const Term& term, const VariableScope& scope) {
    for_each_subterm(term, [&](const Term& t) {
      if (const auto* app = std::get_if<FunctionApp>(&t.node)) {
        const auto name = app->function.spelling();
        if (const auto* op = table.operation(name)) {
          check_args(app->args, op->sig.arg_sorts, op->data_type, name, t.span, scope);
        } else {
          out.push_back(make(pattern, codes::UndeclaredName, t.span, "Unknown operation " + quote(name) + "."));
        }
      } else if (const auto* dv = std::get_if<DataVar>(&t.node)) {
        auto entry = scope.lookup(dv->var.name.text);
        if (entry && entry->target && entry->target->is_component()) {
          out.push_back(make(pattern, codes::SortMismatch, t.span,
                             "Component variable " + quote(dv->var.name.text) + " cannot be used as a data value."));
        }
      } else if (const auto* read = std::get_if<PortRead>(&t.node)) {
        expect_component(read->var, scope);
      } else if (const auto* id = std::get_if<IdRead>(&t.node)) {
        expect_component(id->var, scope);
      }
    });
  };

  for_each_node(pattern, [&](const Formula& f, const VariableScope& scope) {
    for_each_atom_term(f, [&](const Term& t) { check_term(t, scope); });
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ValAtom>) {
            expect_component(x.port.var, scope);
            Term port_term{x.port, x.port.span};
            auto want = infer_sort(port_term, scope, table);
            auto got = infer_sort(x.value, scope, table);
            if (want && got && *want != *got) {
              mismatch(x.value.span, "Value for port " + quote(x.port.var.name.text + "." + x.port.port.text),
                       *got, *want);
            }
          } else if constexpr (std::is_same_v<T, TermEqAtom>) {
            auto lhs = infer_sort(x.lhs, scope, table);
            auto rhs = infer_sort(x.rhs, scope, table);
            if (lhs && rhs && *lhs != *rhs) {
              mismatch(x.rhs.span, "Right-hand side of '='", *rhs, *lhs);
            }
          } else if constexpr (std::is_same_v<T, PredicateAtom>) {
            const auto name = x.predicate.spelling();
            if (const auto* pred = table.predicate(name)) {
              check_args(x.args, pred->sig.arg_sorts, pred->data_type, name, f.span, scope);
            } else {
              out.push_back(make(pattern, codes::UndeclaredName, f.span, "Unknown predicate " + quote(name) + "."));
            }
          } else if constexpr (std::is_same_v<T, CActAtom>) {
            expect_component(x.var, scope);
          } else if constexpr (std::is_same_v<T, ConnAtom>) {
            expect_component(x.from.var, scope);
            expect_component(x.to.var, scope);
          } else if constexpr (std::is_same_v<T, EqAtom>) {
            const bool lhs_ok = expect_component(x.lhs, scope);
            const bool rhs_ok = expect_component(x.rhs, scope);
            if (lhs_ok && rhs_ok) {
              const auto* a = scope.lookup(x.lhs.name.text)->target;
              const auto* b = scope.lookup(x.rhs.name.text)->target;
              if (a->ref.sort.text != b->ref.sort.text) {
                out.push_back(make(pattern, codes::SortMismatch, f.span,
                                   "eq compares components of different types " + quote(a->ref.sort.text) +
                                       " and " + quote(b->ref.sort.text) + "."));
              }
            }
          }
        },
        f.node);
  });
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_ports(const Pattern& pattern, const SymbolTable& table) {
  std::vector<Diagnostic> out;

  // Static `connects` declarations.
  for (const auto& ct : pattern.component_types) {
    for (const auto& port : ct.output_ports) {
      for (const auto& target : port.connects) {
        const auto spelling = target.component_type.text + "." + target.port.text;
        const Span span = merge(target.component_type.span, target.port.span);
        const auto* to = table.port(target.component_type.text, target.port.text);
        if (!to || to->direction != PortDirection::Input) {
          auto d = make(pattern, codes::InvalidConnects, span,
                        "Connection target " + quote(spelling) + " is not an input port of a declared component type.");
          if (const auto* tct = table.component_type(target.component_type.text)) {
            for (const auto& in : tct->input_ports) {
              d.suggestions.push_back(tct->name.text + "." + in.name.text);
            }
            std::sort(d.suggestions.begin(), d.suggestions.end());
          }
          out.push_back(std::move(d));
          continue;
        }
        auto from_sort = port_sort(port, table);
        auto to_sort = port_sort(*to, table);
        if (from_sort && to_sort && *from_sort != *to_sort) {
          out.push_back(make(pattern, codes::InvalidConnects, span,
                             "Port " + quote(ct.name.text + "." + port.name.text) + " of sort " +
                                 quote(from_sort->qualified()) + " cannot connect to " + quote(spelling) +
                                 " of sort " + quote(to_sort->qualified()) + "."));
        }
      }
    }
  }

  // Resolves a port read; reports E004 and returns null when the port does
  // not exist on the variable's type.
  auto resolve = [&](const PortRead& read, const VariableScope& scope) -> const Port* {
    const auto* ct = component_of(read.var, scope, table);
    if (!ct) {
      return nullptr;
    }
    if (const auto* port = ct->find_port(read.port.text)) {
      return port;
    }
    auto d = make(pattern, codes::UnknownPort, read.port.span,
                  "Component type " + quote(ct->name.text) + " of " + quote(read.var.name.text) +
                      " has no port " + quote(read.port.text) + ".");
    d.suggestions = port_names(*ct);
    out.push_back(std::move(d));
    return nullptr;
  };

  for_each_node(pattern, [&](const Formula& f, const VariableScope& scope) {
    for_each_atom_term(f, [&](const Term& term) {
      for_each_subterm(term, [&](const Term& t) {
        if (const auto* read = std::get_if<PortRead>(&t.node)) {
          resolve(*read, scope);
        }
      });
    });
    if (const auto* val = std::get_if<ValAtom>(&f.node)) {
      resolve(val->port, scope);
    } else if (const auto* conn = std::get_if<ConnAtom>(&f.node)) {
      const auto* from = resolve(conn->from, scope);
      const auto* to = resolve(conn->to, scope);
      if (from && from->direction != PortDirection::Output) {
        out.push_back(make(pattern, codes::ConnDirection, conn->from.span,
                           "conn expects an output port first, but " +
                               quote(conn->from.var.name.text + "." + conn->from.port.text) + " is an input port."));
      }
      if (to && to->direction != PortDirection::Input) {
        out.push_back(make(pattern, codes::ConnDirection, conn->to.span,
                           "conn expects an input port second, but " +
                               quote(conn->to.var.name.text + "." + conn->to.port.text) + " is an output port."));
      }
      if (from && to && from->direction == PortDirection::Output && to->direction == PortDirection::Input &&
          !from->connects.empty()) {
        const auto* to_type = component_of(conn->to.var, scope, table);
        const bool declared = std::any_of(from->connects.begin(), from->connects.end(), [&](const PortTarget& t) {
          return t.component_type.text == to_type->name.text && t.port.text == to->name.text;
        });
        if (!declared) {
          const auto* from_type = component_of(conn->from.var, scope, table);
          out.push_back(make(pattern, codes::UndeclaredConnection, f.span,
                             "No static connection from " + quote(from_type->name.text + "." + from->name.text) +
                                 " to " + quote(to_type->name.text + "." + to->name.text) + " is declared.",
                             Severity::Warning));
        }
      }
    }
  });
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_variables(const Pattern& pattern, const SymbolTable& table) {
  std::vector<Diagnostic> out;

  for_each_block(pattern, [&](const FormulaBlock& block) {
    std::set<std::string> names;
    for (const auto& v : block.variables) {
      if (!names.insert(v.name.text).second) {
        out.push_back(make(pattern, codes::DuplicateName, v.name.span, "Duplicate variable " + quote(v.name.text) + "."));
      }
      if (v.target.is_component() && !table.component_type(v.target.ref.sort.text)) {
        out.push_back(make(pattern, codes::UndeclaredName, v.target.ref.span,
                           "Unknown component type " + quote(v.target.ref.sort.text) + "."));
      }
    }
    std::set<std::string> labels;
    for (const auto& lf : block.formulas) {
      if (!labels.insert(lf.label.text).second) {
        out.push_back(make(pattern, codes::DuplicateName, lf.label.span, "Duplicate label " + quote(lf.label.text) + "."));
      }
    }
  });

  auto use = [&](const VarUse& var, const VariableScope& scope) {
    if (!scope.lookup(var.name.text)) {
      out.push_back(make(pattern, codes::UndeclaredName, var.name.span, "Undeclared variable " + quote(var.name.text) + "."));
    }
  };

  for_each_node(pattern, [&](const Formula& f, const VariableScope& scope) {
    for_each_atom_term(f, [&](const Term& term) {
      for_each_subterm(term, [&](const Term& t) {
        std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, PortRead> || std::is_same_v<T, DataVar>) {
                use(x.var, scope);
              } else if constexpr (std::is_same_v<T, IdRead>) {
                use(x.var, scope);
                const auto* ct = component_of(x.var, scope, table);
                if (ct && !ct->id_sort) {
                  out.push_back(make(pattern, codes::UndeclaredName, t.span,
                                     "Component type " + quote(ct->name.text) + " declares no Id."));
                }
              }
            },
            t.node);
      });
    });
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ValAtom>) {
            use(x.port.var, scope);
          } else if constexpr (std::is_same_v<T, CActAtom>) {
            use(x.var, scope);
          } else if constexpr (std::is_same_v<T, ConnAtom>) {
            use(x.from.var, scope);
            use(x.to.var, scope);
          } else if constexpr (std::is_same_v<T, EqAtom>) {
            use(x.lhs, scope);
            use(x.rhs, scope);
          } else if constexpr (std::is_same_v<T, Quantified>) {
            if (!x.binder.target) {
              out.push_back(make(pattern, codes::UndeclaredName, x.binder.name.span,
                                 "Binder " + quote(x.binder.name.text) +
                                     " has no type annotation and no declaration in scope."));
            } else if (x.binder.target->is_component() && !table.component_type(x.binder.target->ref.sort.text)) {
              out.push_back(make(pattern, codes::UndeclaredName, x.binder.target->ref.span,
                                 "Unknown component type " + quote(x.binder.target->ref.sort.text) + "."));
            }
          }
        },
        f.node);
  });
  sort_diagnostics(out);
  return out;
}

ValidationReport validate(const Pattern& pattern) {
  const auto table = build_symbol_table(pattern);
  ValidationReport report;
  report.diagnostics = table.diagnostics;
  for (auto&& part : {check_sorts(pattern, table), check_signatures(pattern, table), check_ports(pattern, table),
                      check_variables(pattern, table)}) {
    report.diagnostics.insert(report.diagnostics.end(), part.begin(), part.end());
  }
  sort_diagnostics(report.diagnostics);
  report.ok = !has_errors(report.diagnostics);
  return report;
}

}  // namespace factum
