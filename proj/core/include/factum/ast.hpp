#pragma once

// Abstract syntax of the pattern language.
//
// Every node carries the source span it was parsed from. Spans are
// positional metadata only: `structurally_equal` ignores them, so a
// pattern and its re-parsed pretty-printed form compare equal.
//
// Formula and term trees share immutable children through
// `std::shared_ptr<const ...>`; nothing mutates a node after construction.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "factum/diagnostic.hpp"

namespace factum {

struct Name {
  std::string text;
  Span span;
};

// `Sort` or `DataType.Sort`.
struct SortRef {
  std::optional<Name> qualifier;
  Name sort;
  Span span;

  std::string spelling() const;
};

// `DataType.name` as used for operation and predicate applications.
struct QualifiedName {
  Name data_type;
  Name name;

  std::string spelling() const { return data_type.text + "." + name.text; }
};

struct OperationSig {
  Name name;
  std::vector<SortRef> arg_sorts;
  SortRef result_sort;
};

struct PredicateSig {
  Name name;
  std::vector<SortRef> arg_sorts;
};

struct DataTypeSpec {
  Name name;
  std::vector<Name> sorts;
  std::vector<OperationSig> operations;
  std::vector<PredicateSig> predicates;
};

enum class PortDirection { Input, Output };

// `Type.port` target of a `connects` clause.
struct PortTarget {
  Name component_type;
  Name port;
};

struct Port {
  Name name;
  PortDirection direction = PortDirection::Input;
  SortRef sort;
  std::vector<PortTarget> connects;  // output ports only
};

struct ComponentType {
  Name name;
  Name short_name;
  std::optional<SortRef> id_sort;
  std::vector<Port> input_ports;
  std::vector<Port> output_ports;

  const Port* find_port(std::string_view port_name) const;
};

enum class VariableKind { Rigid, Flexible };

// A variable ranges either over components of a type or over a sort.
struct VariableTarget {
  enum class Kind { Component, Data };
  Kind kind = Kind::Component;
  // For components only `ref.sort` is used and holds the type name.
  SortRef ref;

  bool is_component() const { return kind == Kind::Component; }
  std::string spelling() const { return is_component() ? ref.sort.text : ref.spelling(); }
};

struct VariableDecl {
  Name name;
  VariableKind kind = VariableKind::Rigid;
  VariableTarget target;
};

// ---------------------------------------------------------------- terms

struct Term;

// Use of a variable name inside a formula.
struct VarUse {
  Name name;
};

struct PortRead {
  VarUse var;
  Name port;
  Span span;
};

struct IdRead {
  VarUse var;
};

struct DataVar {
  VarUse var;
};

struct FunctionApp {
  QualifiedName function;
  std::vector<Term> args;
};

struct Term {
  std::variant<PortRead, IdRead, DataVar, FunctionApp> node;
  Span span;
};

// ------------------------------------------------------------- formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct ValAtom {
  PortRead port;
  Term value;
};

struct CActAtom {
  VarUse var;
};

struct ConnAtom {
  PortRead from;
  PortRead to;
};

struct EqAtom {
  VarUse lhs;
  VarUse rhs;
};

struct TermEqAtom {
  Term lhs;
  Term rhs;
};

struct PredicateAtom {
  QualifiedName predicate;
  std::vector<Term> args;
};

struct Negation {
  FormulaPtr operand;
};

enum class BinaryOp { And, Or, Implies, WeakUntil };

struct Binary {
  BinaryOp op = BinaryOp::And;
  FormulaPtr lhs;
  FormulaPtr rhs;
};

struct Globally {
  FormulaPtr body;
};

enum class Quantifier { Forall, Exists };

// A binder takes its range from an explicit `x: T` annotation or, when
// unannotated, from the enclosing block declaration of the same name.
struct Binder {
  Name name;
  std::optional<VariableTarget> target;
  bool annotated = false;
};

struct Quantified {
  Quantifier quantifier = Quantifier::Forall;
  Binder binder;
  FormulaPtr body;
};

struct Formula {
  std::variant<ValAtom, CActAtom, ConnAtom, EqAtom, TermEqAtom, PredicateAtom, Negation, Binary,
               Globally, Quantified>
      node;
  Span span;
};

struct LabeledFormula {
  Name label;
  FormulaPtr formula;
};

struct FormulaBlock {
  std::vector<VariableDecl> variables;
  std::vector<LabeledFormula> formulas;
  Span span;

  const VariableDecl* find_variable(std::string_view name) const;
};

struct Pattern {
  Name name;
  Name short_name;
  std::vector<DataTypeSpec> data_types;
  std::vector<ComponentType> component_types;
  std::optional<FormulaBlock> arch_spec;
  std::optional<FormulaBlock> arch_guarantee;
  std::vector<Pattern> sub_patterns;
  Span span;
  // Name of the file the pattern was read from; used for diagnostics only.
  std::string source;

  const ComponentType* find_component_type(std::string_view type_name) const;
};

// Structural equality: compares everything except spans and `source`.
bool structurally_equal(const Term& a, const Term& b);
bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const Pattern& a, const Pattern& b);

// Names used as variables in `formula` that are not bound by a binder
// inside it.
std::set<std::string> free_variables(const Formula& formula);
// The same names, by first occurrence from left to right.
std::vector<std::string> free_variables_in_order(const Formula& formula);

// Convenience constructors, mostly for tests and generators. Spans are
// left default-initialised.
namespace build {
Name name(std::string text);
SortRef sort(std::string qualified_or_plain);
VariableTarget component(std::string type_name);
VariableTarget data(std::string sort);
VariableDecl rig(std::string name, VariableTarget target);
VariableDecl flex(std::string name, VariableTarget target);

PortRead port(std::string var, std::string port_name);
Term port_term(std::string var, std::string port_name);
Term id(std::string var);
Term var(std::string name);
Term app(std::string qualified_function, std::vector<Term> args);

FormulaPtr val(PortRead port, Term value);
FormulaPtr cact(std::string var);
FormulaPtr conn(PortRead from, PortRead to);
FormulaPtr eq(std::string lhs, std::string rhs);
FormulaPtr term_eq(Term lhs, Term rhs);
FormulaPtr pred(std::string qualified_predicate, std::vector<Term> args);
FormulaPtr negate(FormulaPtr operand);
FormulaPtr binary(BinaryOp op, FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr wuntil(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr globally(FormulaPtr body);
FormulaPtr exists(std::string name, std::optional<VariableTarget> target, FormulaPtr body,
                  bool annotated = true);
FormulaPtr forall(std::string name, std::optional<VariableTarget> target, FormulaPtr body,
                  bool annotated = true);
}  // namespace build

}  // namespace factum
