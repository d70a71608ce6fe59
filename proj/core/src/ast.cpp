#include "factum/ast.hpp"

#include <algorithm>
#include <utility>

namespace factum {

std::string SortRef::spelling() const {
  return qualifier ? qualifier->text + "." + sort.text : sort.text;
}

const Port* ComponentType::find_port(std::string_view port_name) const {
  for (const auto* list : {&input_ports, &output_ports}) {
    for (const auto& port : *list) {
      if (port.name.text == port_name) {
        return &port;
      }
    }
  }
  return nullptr;
}

const VariableDecl* FormulaBlock::find_variable(std::string_view name) const {
  for (const auto& v : variables) {
    if (v.name.text == name) {
      return &v;
    }
  }
  return nullptr;
}

const ComponentType* Pattern::find_component_type(std::string_view type_name) const {
  for (const auto& ct : component_types) {
    if (ct.name.text == type_name) {
      return &ct;
    }
  }
  return nullptr;
}

// ------------------------------------------------------ structural equality

namespace {

bool eq(const Name& a, const Name& b) { return a.text == b.text; }

bool eq(const std::optional<Name>& a, const std::optional<Name>& b) {
  return a.has_value() == b.has_value() && (!a || eq(*a, *b));
}

bool eq(const SortRef& a, const SortRef& b) { return eq(a.qualifier, b.qualifier) && eq(a.sort, b.sort); }

bool eq(const QualifiedName& a, const QualifiedName& b) {
  return eq(a.data_type, b.data_type) && eq(a.name, b.name);
}

bool eq(const VarUse& a, const VarUse& b) { return eq(a.name, b.name); }

bool eq(const PortRead& a, const PortRead& b) { return eq(a.var, b.var) && eq(a.port, b.port); }

bool eq(const VariableTarget& a, const VariableTarget& b) {
  return a.kind == b.kind && eq(a.ref, b.ref);
}

template <typename T, typename F>
bool all_eq(const std::vector<T>& a, const std::vector<T>& b, F&& f) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), f);
}

bool eq_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  return all_eq(a, b, [](const Term& x, const Term& y) { return structurally_equal(x, y); });
}

bool eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) {
    return !a && !b;
  }
  return structurally_equal(*a, *b);
}

bool eq(const VariableDecl& a, const VariableDecl& b) {
  return eq(a.name, b.name) && a.kind == b.kind && eq(a.target, b.target);
}

bool eq(const OperationSig& a, const OperationSig& b) {
  return eq(a.name, b.name) &&
         all_eq(a.arg_sorts, b.arg_sorts, [](const auto& x, const auto& y) { return eq(x, y); }) &&
         eq(a.result_sort, b.result_sort);
}

bool eq(const PredicateSig& a, const PredicateSig& b) {
  return eq(a.name, b.name) &&
         all_eq(a.arg_sorts, b.arg_sorts, [](const auto& x, const auto& y) { return eq(x, y); });
}

bool eq(const DataTypeSpec& a, const DataTypeSpec& b) {
  auto f = [](const auto& x, const auto& y) { return eq(x, y); };
  return eq(a.name, b.name) && all_eq(a.sorts, b.sorts, f) && all_eq(a.operations, b.operations, f) &&
         all_eq(a.predicates, b.predicates, f);
}

bool eq(const PortTarget& a, const PortTarget& b) {
  return eq(a.component_type, b.component_type) && eq(a.port, b.port);
}

bool eq(const Port& a, const Port& b) {
  return eq(a.name, b.name) && a.direction == b.direction && eq(a.sort, b.sort) &&
         all_eq(a.connects, b.connects, [](const auto& x, const auto& y) { return eq(x, y); });
}

bool eq(const std::optional<SortRef>& a, const std::optional<SortRef>& b) {
  return a.has_value() == b.has_value() && (!a || eq(*a, *b));
}

bool eq(const ComponentType& a, const ComponentType& b) {
  auto f = [](const auto& x, const auto& y) { return eq(x, y); };
  return eq(a.name, b.name) && eq(a.short_name, b.short_name) && eq(a.id_sort, b.id_sort) &&
         all_eq(a.input_ports, b.input_ports, f) && all_eq(a.output_ports, b.output_ports, f);
}

bool eq(const std::optional<FormulaBlock>& a, const std::optional<FormulaBlock>& b) {
  if (a.has_value() != b.has_value()) {
    return false;
  }
  if (!a) {
    return true;
  }
  return all_eq(a->variables, b->variables, [](const auto& x, const auto& y) { return eq(x, y); }) &&
         all_eq(a->formulas, b->formulas, [](const LabeledFormula& x, const LabeledFormula& y) {
           return eq(x.label, y.label) && eq(x.formula, y.formula);
         });
}

}  // namespace

bool structurally_equal(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) {
    return false;
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, PortRead>) {
          return eq(x, y);
        } else if constexpr (std::is_same_v<T, IdRead> || std::is_same_v<T, DataVar>) {
          return eq(x.var, y.var);
        } else {
          return eq(x.function, y.function) && eq_terms(x.args, y.args);
        }
      },
      a.node);
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) {
    return false;
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ValAtom>) {
          return eq(x.port, y.port) && structurally_equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, CActAtom>) {
          return eq(x.var, y.var);
        } else if constexpr (std::is_same_v<T, ConnAtom>) {
          return eq(x.from, y.from) && eq(x.to, y.to);
        } else if constexpr (std::is_same_v<T, EqAtom>) {
          return eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, TermEqAtom>) {
          return structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, PredicateAtom>) {
          return eq(x.predicate, y.predicate) && eq_terms(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Negation>) {
          return eq(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Globally>) {
          return eq(x.body, y.body);
        } else {
          static_assert(std::is_same_v<T, Quantified>);
          const bool targets = x.binder.target.has_value() == y.binder.target.has_value() &&
                               (!x.binder.target || eq(*x.binder.target, *y.binder.target));
          return x.quantifier == y.quantifier && eq(x.binder.name, y.binder.name) && targets &&
                 x.binder.annotated == y.binder.annotated && eq(x.body, y.body);
        }
      },
      a.node);
}

bool structurally_equal(const Pattern& a, const Pattern& b) {
  auto f = [](const auto& x, const auto& y) { return eq(x, y); };
  return eq(a.name, b.name) && eq(a.short_name, b.short_name) &&
         all_eq(a.data_types, b.data_types, f) && all_eq(a.component_types, b.component_types, f) &&
         eq(a.arch_spec, b.arch_spec) && eq(a.arch_guarantee, b.arch_guarantee) &&
         all_eq(a.sub_patterns, b.sub_patterns,
                [](const Pattern& x, const Pattern& y) { return structurally_equal(x, y); });
}

// ------------------------------------------------------------ free variables

namespace {

void collect(const Term& term, const std::vector<std::string>& bound, std::vector<std::string>& out);

void use(const VarUse& v, const std::vector<std::string>& bound, std::vector<std::string>& out) {
  if (std::find(bound.begin(), bound.end(), v.name.text) == bound.end() &&
      std::find(out.begin(), out.end(), v.name.text) == out.end()) {
    out.push_back(v.name.text);
  }
}

void collect(const Term& term, const std::vector<std::string>& bound, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FunctionApp>) {
          for (const auto& arg : x.args) {
            collect(arg, bound, out);
          }
        } else {
          use(x.var, bound, out);
        }
      },
      term.node);
}

void collect(const Formula& formula, std::vector<std::string>& bound, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValAtom>) {
          use(x.port.var, bound, out);
          collect(x.value, bound, out);
        } else if constexpr (std::is_same_v<T, CActAtom>) {
          use(x.var, bound, out);
        } else if constexpr (std::is_same_v<T, ConnAtom>) {
          use(x.from.var, bound, out);
          use(x.to.var, bound, out);
        } else if constexpr (std::is_same_v<T, EqAtom>) {
          use(x.lhs, bound, out);
          use(x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, TermEqAtom>) {
          collect(x.lhs, bound, out);
          collect(x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, PredicateAtom>) {
          for (const auto& arg : x.args) {
            collect(arg, bound, out);
          }
        } else if constexpr (std::is_same_v<T, Negation>) {
          collect(*x.operand, bound, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect(*x.lhs, bound, out);
          collect(*x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, Globally>) {
          collect(*x.body, bound, out);
        } else {
          bound.push_back(x.binder.name.text);
          collect(*x.body, bound, out);
          bound.pop_back();
        }
      },
      formula.node);
}

}  // namespace

std::vector<std::string> free_variables_in_order(const Formula& formula) {
  std::vector<std::string> out;
  std::vector<std::string> bound;
  collect(formula, bound, out);
  return out;
}

std::set<std::string> free_variables(const Formula& formula) {
  const auto ordered = free_variables_in_order(formula);
  return {ordered.begin(), ordered.end()};
}

// ------------------------------------------------------------------- build

namespace build {

Name name(std::string text) { return Name{std::move(text), {}}; }

SortRef sort(std::string qualified_or_plain) {
  SortRef ref;
  const auto dot = qualified_or_plain.find('.');
  if (dot == std::string::npos) {
    ref.sort = name(std::move(qualified_or_plain));
  } else {
    ref.qualifier = name(qualified_or_plain.substr(0, dot));
    ref.sort = name(qualified_or_plain.substr(dot + 1));
  }
  return ref;
}

VariableTarget component(std::string type_name) {
  VariableTarget t;
  t.kind = VariableTarget::Kind::Component;
  t.ref.sort = name(std::move(type_name));
  return t;
}

VariableTarget data(std::string s) {
  VariableTarget t;
  t.kind = VariableTarget::Kind::Data;
  t.ref = sort(std::move(s));
  return t;
}

VariableDecl rig(std::string n, VariableTarget target) {
  return VariableDecl{name(std::move(n)), VariableKind::Rigid, std::move(target)};
}

VariableDecl flex(std::string n, VariableTarget target) {
  return VariableDecl{name(std::move(n)), VariableKind::Flexible, std::move(target)};
}

PortRead port(std::string v, std::string port_name) {
  return PortRead{VarUse{name(std::move(v))}, name(std::move(port_name)), {}};
}

Term port_term(std::string v, std::string port_name) {
  return Term{port(std::move(v), std::move(port_name)), {}};
}

Term id(std::string v) { return Term{IdRead{VarUse{name(std::move(v))}}, {}}; }

Term var(std::string n) { return Term{DataVar{VarUse{name(std::move(n))}}, {}}; }

Term app(std::string qualified_function, std::vector<Term> args) {
  const auto dot = qualified_function.find('.');
  QualifiedName fn{name(qualified_function.substr(0, dot)), name(qualified_function.substr(dot + 1))};
  return Term{FunctionApp{std::move(fn), std::move(args)}, {}};
}

namespace {
template <typename T>
FormulaPtr make(T node) {
  return std::make_shared<const Formula>(Formula{std::move(node), {}});
}
}  // namespace

FormulaPtr val(PortRead p, Term value) { return make(ValAtom{std::move(p), std::move(value)}); }
FormulaPtr cact(std::string v) { return make(CActAtom{VarUse{name(std::move(v))}}); }
FormulaPtr conn(PortRead from, PortRead to) { return make(ConnAtom{std::move(from), std::move(to)}); }
FormulaPtr eq(std::string lhs, std::string rhs) {
  return make(EqAtom{VarUse{name(std::move(lhs))}, VarUse{name(std::move(rhs))}});
}
FormulaPtr term_eq(Term lhs, Term rhs) { return make(TermEqAtom{std::move(lhs), std::move(rhs)}); }
FormulaPtr pred(std::string qualified_predicate, std::vector<Term> args) {
  const auto dot = qualified_predicate.find('.');
  QualifiedName p{name(qualified_predicate.substr(0, dot)), name(qualified_predicate.substr(dot + 1))};
  return make(PredicateAtom{std::move(p), std::move(args)});
}
FormulaPtr negate(FormulaPtr operand) { return make(Negation{std::move(operand)}); }
FormulaPtr binary(BinaryOp op, FormulaPtr lhs, FormulaPtr rhs) {
  return make(Binary{op, std::move(lhs), std::move(rhs)});
}
FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs) { return binary(BinaryOp::And, std::move(lhs), std::move(rhs)); }
FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs) { return binary(BinaryOp::Or, std::move(lhs), std::move(rhs)); }
FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs) {
  return binary(BinaryOp::Implies, std::move(lhs), std::move(rhs));
}
FormulaPtr wuntil(FormulaPtr lhs, FormulaPtr rhs) {
  return binary(BinaryOp::WeakUntil, std::move(lhs), std::move(rhs));
}
FormulaPtr globally(FormulaPtr body) { return make(Globally{std::move(body)}); }

FormulaPtr exists(std::string n, std::optional<VariableTarget> target, FormulaPtr body, bool annotated) {
  return make(Quantified{Quantifier::Exists, Binder{name(std::move(n)), std::move(target), annotated},
                         std::move(body)});
}

FormulaPtr forall(std::string n, std::optional<VariableTarget> target, FormulaPtr body, bool annotated) {
  return make(Quantified{Quantifier::Forall, Binder{name(std::move(n)), std::move(target), annotated},
                         std::move(body)});
}

}  // namespace build

}  // namespace factum
