#include "factum/eval.hpp"

#include <algorithm>

namespace factum {

TraceView TraceView::of(const ConfigurationTrace& trace) {
  TraceView view;
  view.instances = &trace.instances;
  view.model = &trace.model;
  for (const auto& step : trace.steps) {
    view.steps.push_back(&step);
  }
  return view;
}

struct Evaluator::Frame {
  const TraceView* trace;
  const Assignment* assignment;
  // Binder-bound variables, innermost last.
  std::vector<std::pair<const std::string*, Binding>> locals;

  const Binding& lookup(const std::string& name, std::size_t time) const {
    for (auto it = locals.rbegin(); it != locals.rend(); ++it) {
      if (*it->first == name) {
        return it->second;
      }
    }
    if (auto it = assignment->rigid.find(name); it != assignment->rigid.end()) {
      return it->second;
    }
    if (auto it = assignment->flexible.find(name); it != assignment->flexible.end() && time < it->second.size()) {
      return it->second[time];
    }
    throw TraceError("variable '" + name + "' is not assigned at time " + std::to_string(time));
  }

  std::optional<std::size_t> instance(const VarUse& var, std::size_t time) const {
    const auto& b = lookup(var.name.text, time);
    if (const auto* i = std::get_if<std::size_t>(&b)) {
      return *i;
    }
    return std::nullopt;
  }
};

Evaluator::Evaluator(const Pattern& pattern) : table_(build_symbol_table(pattern)) {}

std::string Evaluator::sort_of(const VariableTarget& target) const {
  auto r = resolve_sort(target.ref, std::nullopt, table_);
  return r.sort ? r.sort->qualified() : std::string();
}

bool Evaluator::eval(const Formula& formula, const TraceView& trace, std::size_t time,
                     const Assignment& assignment) const {
  Frame frame{&trace, &assignment, {}};
  return eval(formula, frame, time);
}

ValueSet Evaluator::eval(const Term& term, const TraceView& trace, std::size_t time,
                         const Assignment& assignment) const {
  Frame frame{&trace, &assignment, {}};
  return eval(term, frame, time);
}

namespace {

// Calls `visit` for every combination of one value from each set.
template <typename Visit>
bool all_tuples(const std::vector<ValueSet>& sets, Visit&& visit) {
  Tuple tuple(sets.size());
  std::vector<ValueSet::const_iterator> it;
  for (const auto& s : sets) {
    if (s.empty()) {
      return true;
    }
    it.push_back(s.begin());
  }
  while (true) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      tuple[i] = *it[i];
    }
    if (!visit(tuple)) {
      return false;
    }
    std::size_t k = sets.size();
    while (true) {
      if (k == 0) {
        return true;
      }
      --k;
      if (++it[k] != sets[k].end()) {
        break;
      }
      it[k] = sets[k].begin();
    }
  }
}

}  // namespace

ValueSet Evaluator::eval(const Term& t, const Frame& frame, std::size_t time) const {
  return std::visit(
      [&](const auto& x) -> ValueSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PortRead>) {
          auto i = frame.instance(x.var, time);
          if (!i) {
            return {};
          }
          return frame.trace->steps[time]->valuation(PortKey{*i, x.port.text});
        } else if constexpr (std::is_same_v<T, IdRead>) {
          auto i = frame.instance(x.var, time);
          if (!i || !(*frame.trace->instances)[*i].id_value) {
            return {};
          }
          return {*(*frame.trace->instances)[*i].id_value};
        } else if constexpr (std::is_same_v<T, DataVar>) {
          const auto& b = frame.lookup(x.var.name.text, time);
          if (const auto* v = std::get_if<Value>(&b)) {
            return {*v};
          }
          return {};
        } else {
          const auto name = x.function.spelling();
          auto table = frame.trace->model->operations.find(name);
          if (table == frame.trace->model->operations.end()) {
            throw TraceError("the model has no table for operation '" + name + "'");
          }
          std::vector<ValueSet> args;
          for (const auto& a : x.args) {
            args.push_back(eval(a, frame, time));
          }
          ValueSet out;
          all_tuples(args, [&](const Tuple& tuple) {
            auto r = table->second.find(tuple);
            if (r == table->second.end()) {
              throw TraceError("operation '" + name + "' is undefined on the given arguments");
            }
            out.insert(r->second);
            return true;
          });
          return out;
        }
      },
      t.node);
}

bool Evaluator::eval(const Formula& f, Frame& frame, std::size_t time) const {
  const auto& step = *frame.trace->steps[time];
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValAtom>) {
          auto i = frame.instance(x.port.var, time);
          if (!i) {
            return false;
          }
          const auto& port = step.valuation(PortKey{*i, x.port.port.text});
          if (const auto* dv = std::get_if<DataVar>(&x.value.node)) {
            const auto* v = std::get_if<Value>(&frame.lookup(dv->var.name.text, time));
            return v && port.count(*v);
          }
          const auto values = eval(x.value, frame, time);
          return std::includes(port.begin(), port.end(), values.begin(), values.end());
        } else if constexpr (std::is_same_v<T, CActAtom>) {
          auto i = frame.instance(x.var, time);
          return i && step.active.count(*i);
        } else if constexpr (std::is_same_v<T, ConnAtom>) {
          auto from = frame.instance(x.from.var, time);
          auto to = frame.instance(x.to.var, time);
          return from && to &&
                 step.connections.count(Connection{PortKey{*from, x.from.port.text}, PortKey{*to, x.to.port.text}});
        } else if constexpr (std::is_same_v<T, EqAtom>) {
          return frame.lookup(x.lhs.name.text, time) == frame.lookup(x.rhs.name.text, time);
        } else if constexpr (std::is_same_v<T, TermEqAtom>) {
          return eval(x.lhs, frame, time) == eval(x.rhs, frame, time);
        } else if constexpr (std::is_same_v<T, PredicateAtom>) {
          const auto name = x.predicate.spelling();
          auto ext = frame.trace->model->predicates.find(name);
          std::vector<ValueSet> args;
          for (const auto& a : x.args) {
            args.push_back(eval(a, frame, time));
          }
          return all_tuples(args, [&](const Tuple& tuple) {
            return ext != frame.trace->model->predicates.end() && ext->second.count(tuple) > 0;
          });
        } else if constexpr (std::is_same_v<T, Negation>) {
          return !eval(*x.operand, frame, time);
        } else if constexpr (std::is_same_v<T, Binary>) {
          switch (x.op) {
            case BinaryOp::And:
              return eval(*x.lhs, frame, time) && eval(*x.rhs, frame, time);
            case BinaryOp::Or:
              return eval(*x.lhs, frame, time) || eval(*x.rhs, frame, time);
            case BinaryOp::Implies:
              return !eval(*x.lhs, frame, time) || eval(*x.rhs, frame, time);
            case BinaryOp::WeakUntil:
              for (std::size_t j = time; j < frame.trace->length(); ++j) {
                if (eval(*x.rhs, frame, j)) {
                  return true;
                }
                if (!eval(*x.lhs, frame, j)) {
                  return false;
                }
              }
              return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Globally>) {
          for (std::size_t j = time; j < frame.trace->length(); ++j) {
            if (!eval(*x.body, frame, j)) {
              return false;
            }
          }
          return true;
        } else {
          if (!x.binder.target) {
            throw TraceError("binder '" + x.binder.name.text + "' has no range");
          }
          const bool exists = x.quantifier == Quantifier::Exists;
          std::vector<Binding> domain;
          if (x.binder.target->is_component()) {
            const auto& type = x.binder.target->ref.sort.text;
            for (auto i : step.active) {
              if ((*frame.trace->instances)[i].type == type) {
                domain.emplace_back(i);
              }
            }
          } else {
            for (const auto& v : frame.trace->model->carrier(sort_of(*x.binder.target))) {
              domain.emplace_back(v);
            }
          }
          frame.locals.emplace_back(&x.binder.name.text, Binding{});
          bool result = !exists;
          for (auto& b : domain) {
            frame.locals.back().second = std::move(b);
            if (eval(*x.body, frame, time) == exists) {
              result = exists;
              break;
            }
          }
          frame.locals.pop_back();
          return result;
        }
      },
      f.node);
}

bool eval_formula(const Formula& formula, const Pattern& pattern, const ConfigurationTrace& trace, std::size_t time,
                  const Assignment& assignment) {
  return Evaluator(pattern).eval(formula, TraceView::of(trace), time, assignment);
}

ValueSet eval_term(const Term& term, const Pattern& pattern, const ConfigurationTrace& trace,
                   const Assignment& assignment, std::size_t time) {
  return Evaluator(pattern).eval(term, TraceView::of(trace), time, assignment);
}

BlockChecker::BlockChecker(const Evaluator& evaluator, const FormulaBlock& block, std::uint64_t ceiling)
    : evaluator_(&evaluator), block_(&block), ceiling_(ceiling) {
  for (const auto& lf : block.formulas) {
    std::vector<Free> free;
    for (const auto& name : free_variables(*lf.formula)) {
      const auto* decl = block.find_variable(name);
      if (!decl) {
        throw TraceError("formula '" + lf.label.text + "' uses undeclared variable '" + name + "'");
      }
      Free v;
      v.name = name;
      v.rigid = decl->kind == VariableKind::Rigid;
      v.component = decl->target.is_component();
      v.domain = v.component ? decl->target.ref.sort.text : evaluator.sort_of(decl->target);
      free.push_back(std::move(v));
    }
    free_.push_back(std::move(free));
  }
}

bool BlockChecker::holds(std::size_t formula, const TraceView& trace) const {
  const auto& free = free_[formula];
  const std::size_t length = trace.length();

  // One odometer digit per rigid variable and per (flexible variable, time).
  std::vector<std::vector<Binding>> domains;
  for (const auto& v : free) {
    std::vector<Binding> d;
    if (v.component) {
      for (std::size_t i = 0; i < trace.instances->size(); ++i) {
        if ((*trace.instances)[i].type == v.domain) {
          d.emplace_back(i);
        }
      }
    } else {
      for (const auto& value : trace.model->carrier(v.domain)) {
        d.emplace_back(value);
      }
    }
    domains.push_back(std::move(d));
  }
  std::vector<std::size_t> digit_var;
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < free.size(); ++k) {
    const std::size_t copies = free[k].rigid ? 1 : length;
    for (std::size_t c = 0; c < copies; ++c) {
      digit_var.push_back(k);
      const auto n = domains[k].size();
      if (n == 0) {
        return true;
      }
      if (total > ceiling_ / n) {
        throw BoundExceeded("formula '" + block_->formulas[formula].label.text + "' needs more than " +
                            std::to_string(ceiling_) + " variable assignments");
      }
      total *= n;
    }
  }

  Assignment a;
  for (const auto& v : free) {
    if (!v.rigid) {
      a.flexible[v.name].resize(length);
    }
  }
  std::vector<std::size_t> index(digit_var.size(), 0);
  const auto& formula_ref = *block_->formulas[formula].formula;
  while (true) {
    std::vector<std::size_t> time_of(free.size(), 0);
    for (std::size_t d = 0; d < digit_var.size(); ++d) {
      const auto k = digit_var[d];
      const auto& b = domains[k][index[d]];
      if (free[k].rigid) {
        a.rigid[free[k].name] = b;
      } else {
        a.flexible[free[k].name][time_of[k]++] = b;
      }
    }
    if (!evaluator_->eval(formula_ref, trace, 0, a)) {
      return false;
    }
    std::size_t d = digit_var.size();
    while (true) {
      if (d == 0) {
        return true;
      }
      --d;
      if (++index[d] < domains[digit_var[d]].size()) {
        break;
      }
      index[d] = 0;
    }
  }
}

std::optional<std::size_t> BlockChecker::first_failure(const TraceView& trace) const {
  for (std::size_t i = 0; i < block_->formulas.size(); ++i) {
    if (!holds(i, trace)) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Verdict> check_spec(const Pattern& pattern, const ConfigurationTrace& trace, std::uint64_t ceiling) {
  const Evaluator evaluator(pattern);
  const auto view = TraceView::of(trace);
  std::vector<Verdict> out;
  for (const auto& [name, block] : {std::pair{"ArchSpec", &pattern.arch_spec}, std::pair{"ArchGuarantee", &pattern.arch_guarantee}}) {
    if (!*block) {
      continue;
    }
    const BlockChecker checker(evaluator, **block, ceiling);
    for (std::size_t i = 0; i < (*block)->formulas.size(); ++i) {
      out.push_back(Verdict{name, (*block)->formulas[i].label.text, checker.holds(i, view)});
    }
  }
  return out;
}

}  // namespace factum
