#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "factum/ast.hpp"
#include "factum/symbol_table.hpp"
#include "factum/trace.hpp"

namespace factum {

// What a variable denotes: an instance (index into the trace's instance
// list) or a data value.
using Binding = std::variant<std::size_t, Value>;

struct Assignment {
  std::map<std::string, Binding> rigid;
  // One entry per time index of the trace.
  std::map<std::string, std::vector<Binding>> flexible;
};

// Search space larger than the configured ceiling.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Borrowed view of a trace, so enumeration can evaluate candidate traces
// without copying configurations.
struct TraceView {
  const std::vector<ComponentInstance>* instances = nullptr;
  std::vector<const Configuration*> steps;
  const DataModel* model = nullptr;

  static TraceView of(const ConfigurationTrace& trace);
  std::size_t length() const { return steps.size(); }
};

// Formula evaluation over finite traces.
//
//   val(x.q, t)   every value of t is in the valuation of x.q
//   t1 = t2       equal value sets
//   G(f)          f at every index from now to the end of the trace
//   f W g         f at every index from now, or g at some k >= now with f
//                 holding strictly before k
//   exists/forall over the instances of the type active now, or over the
//   carrier of the sort; the chosen value stays fixed inside the body
//
// Terms denote value sets: port reads yield the valuation, all other terms
// singletons, and operations apply pointwise to every argument combination.
class Evaluator {
 public:
  explicit Evaluator(const Pattern& pattern);

  bool eval(const Formula& formula, const TraceView& trace, std::size_t time, const Assignment& assignment) const;
  ValueSet eval(const Term& term, const TraceView& trace, std::size_t time, const Assignment& assignment) const;

  const SymbolTable& table() const { return table_; }
  // Qualified sort a data-variable target ranges over ("" if unresolved).
  std::string sort_of(const VariableTarget& target) const;

 private:
  struct Frame;
  bool eval(const Formula& f, Frame& frame, std::size_t time) const;
  ValueSet eval(const Term& t, const Frame& frame, std::size_t time) const;

  SymbolTable table_;
};

bool eval_formula(const Formula& formula, const Pattern& pattern, const ConfigurationTrace& trace, std::size_t time,
                  const Assignment& assignment);
ValueSet eval_term(const Term& term, const Pattern& pattern, const ConfigurationTrace& trace,
                   const Assignment& assignment, std::size_t time);

struct Verdict {
  std::string block;  // "ArchSpec" or "ArchGuarantee"
  std::string label;
  bool holds = false;
};

inline constexpr std::uint64_t kDefaultAssignmentCeiling = 1'000'000;

// Checks the formulas of one block. Variables declared in the block and
// free in a formula are quantified universally: rigid ones over one value
// for the whole trace, flexible ones over every per-step schedule.
// Component variables range over all instances of their type in the
// trace. Throws BoundExceeded when one formula needs more than `ceiling`
// assignments.
class BlockChecker {
 public:
  BlockChecker(const Evaluator& evaluator, const FormulaBlock& block, std::uint64_t ceiling = kDefaultAssignmentCeiling);

  // Index of the first formula that fails on `trace`, or nullopt.
  std::optional<std::size_t> first_failure(const TraceView& trace) const;
  bool holds(std::size_t formula, const TraceView& trace) const;
  const FormulaBlock& block() const { return *block_; }

 private:
  struct Free {
    std::string name;
    bool rigid = true;
    bool component = true;
    std::string domain;  // component type or qualified sort
  };

  const Evaluator* evaluator_;
  const FormulaBlock* block_;
  std::uint64_t ceiling_;
  std::vector<std::vector<Free>> free_;  // per formula
};

// Verdict per label of both blocks, ArchSpec first, in label order.
std::vector<Verdict> check_spec(const Pattern& pattern, const ConfigurationTrace& trace,
                                std::uint64_t ceiling = kDefaultAssignmentCeiling);

}  // namespace factum
