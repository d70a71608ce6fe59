#include "factum/enumerate.hpp"

#include <algorithm>
#include <limits>
#include <type_traits>
#include <variant>

#include "factum/eval.hpp"
#include "factum/symbol_table.hpp"

namespace factum {

std::size_t Bounds::instances_of(const std::string& type) const {
  auto it = max_instances.find(type);
  return it == max_instances.end() ? default_max_instances : it->second;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) {
    return kSaturated;
  }
  return a * b;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

// Subsets of `carrier` with at most `cap` elements: by size, then
// lexicographically by position.
std::vector<ValueSet> small_subsets(const std::vector<Value>& carrier, std::size_t cap) {
  std::vector<ValueSet> out;
  const std::size_t n = carrier.size();
  for (std::size_t k = 0; k <= std::min(cap, n); ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) {
      pick[i] = i;
    }
    while (true) {
      ValueSet s;
      for (auto i : pick) {
        s.insert(carrier[i]);
      }
      out.push_back(std::move(s));
      // Next k-combination of {0..n-1}.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) {
        --i;
      }
      if (i == 0) {
        break;
      }
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) {
        pick[j] = pick[j - 1] + 1;
      }
    }
  }
  return out;
}

struct PortSlot {
  PortKey key;
  std::string sort;
  const Port* port;
};

// Streams the configurations over `instances` in canonical order; stops
// when `visit` returns false.
bool for_each_configuration(const SymbolTable& table, const std::vector<ComponentInstance>& instances,
                            const DataModel& model, const Bounds& bounds,
                            const std::function<bool(Configuration&&)>& visit) {
  auto sort_of = [&](const Port& p) {
    auto r = resolve_sort(p.sort, std::nullopt, table);
    return r.sort ? r.sort->qualified() : std::string();
  };
  std::vector<PortSlot> outputs;
  std::vector<PortSlot> inputs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto* ct = table.component_type(instances[i].type);
    if (!ct) {
      continue;
    }
    for (const auto& p : ct->output_ports) {
      outputs.push_back({{i, p.name.text}, sort_of(p), &p});
    }
    for (const auto& p : ct->input_ports) {
      inputs.push_back({{i, p.name.text}, sort_of(p), &p});
    }
  }
  std::map<std::string, std::vector<ValueSet>> choices;
  for (const auto* list : {&outputs, &inputs}) {
    for (const auto& slot : *list) {
      if (!choices.count(slot.sort)) {
        choices[slot.sort] = small_subsets(model.carrier(slot.sort), bounds.max_values_per_port);
      }
    }
  }

  const std::size_t n = instances.size();
  if (n >= 63) {
    throw BoundExceeded("too many instances");
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::set<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        active.insert(i);
      }
    }
    std::vector<Connection> candidates;
    for (const auto& o : outputs) {
      if (!active.count(o.key.instance)) {
        continue;
      }
      for (const auto& in : inputs) {
        if (!active.count(in.key.instance)) {
          continue;
        }
        const auto& targets = o.port->connects;
        const bool permitted =
            targets.empty() ? o.sort == in.sort
                            : std::any_of(targets.begin(), targets.end(), [&](const PortTarget& t) {
                                return t.component_type.text == instances[in.key.instance].type &&
                                       t.port.text == in.key.port;
                              }) && o.sort == in.sort;
        if (permitted) {
          candidates.push_back({o.key, in.key});
        }
      }
    }
    if (candidates.size() >= 63) {
      throw BoundExceeded("too many candidate connections");
    }
    for (std::uint64_t cmask = 0; cmask < (std::uint64_t{1} << candidates.size()); ++cmask) {
      std::set<Connection> connections;
      std::set<PortKey> fed;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (cmask >> c & 1) {
          connections.insert(candidates[c]);
          fed.insert(candidates[c].to);
        }
      }
      std::vector<const PortSlot*> free;
      for (const auto& o : outputs) {
        if (active.count(o.key.instance)) {
          free.push_back(&o);
        }
      }
      for (const auto& in : inputs) {
        if (active.count(in.key.instance) && !fed.count(in.key)) {
          free.push_back(&in);
        }
      }
      std::vector<std::size_t> idx(free.size(), 0);
      bool more = std::all_of(free.begin(), free.end(), [&](const PortSlot* s) { return !choices[s->sort].empty(); });
      while (more) {
        Configuration config;
        config.active = active;
        config.connections = connections;
        for (std::size_t f = 0; f < free.size(); ++f) {
          const auto& set = choices[free[f]->sort][idx[f]];
          if (!set.empty()) {
            config.valuations[free[f]->key] = set;
          }
        }
        for (const auto& c : connections) {
          const auto& v = config.valuation(c.from);
          if (!v.empty()) {
            config.valuations[c.to].insert(v.begin(), v.end());
          }
        }
        if (!visit(std::move(config))) {
          return false;
        }
        std::size_t k = free.size();
        more = false;
        while (k > 0) {
          --k;
          if (++idx[k] < choices[free[k]->sort].size()) {
            more = true;
            break;
          }
          idx[k] = 0;
        }
      }
    }
  }
  return true;
}

// Instance layouts (instance lists) in canonical order.
std::vector<std::vector<ComponentInstance>> layouts(const Pattern& pattern, const SymbolTable& table,
                                                    const Bounds& bounds, const DataModel& model) {
  std::vector<std::vector<ComponentInstance>> out;
  const auto& types = pattern.component_types;
  std::vector<std::size_t> counts(types.size(), 0);
  while (true) {
    std::vector<ComponentInstance> base;
    std::vector<const std::vector<Value>*> id_domains;
    for (std::size_t t = 0; t < types.size(); ++t) {
      std::optional<std::string> id_sort;
      if (types[t].id_sort) {
        auto r = resolve_sort(*types[t].id_sort, std::nullopt, table);
        id_sort = r.sort ? r.sort->qualified() : std::string();
      }
      for (std::size_t k = 1; k <= counts[t]; ++k) {
        base.push_back({types[t].short_name.text + std::to_string(k), types[t].name.text, std::nullopt});
        id_domains.push_back(id_sort ? &model.carrier(*id_sort) : nullptr);
      }
    }
    // Odometer over the id values of instances whose type declares an Id.
    std::vector<std::size_t> idx(base.size(), 0);
    bool feasible = std::all_of(id_domains.begin(), id_domains.end(),
                                [](const std::vector<Value>* d) { return !d || !d->empty(); });
    while (feasible) {
      auto layout = base;
      for (std::size_t i = 0; i < layout.size(); ++i) {
        if (id_domains[i]) {
          layout[i].id_value = (*id_domains[i])[idx[i]];
        }
      }
      out.push_back(std::move(layout));
      std::size_t i = idx.size();
      while (i > 0) {
        --i;
        if (id_domains[i] && ++idx[i] < id_domains[i]->size()) {
          break;
        }
        idx[i] = 0;
        if (i == 0) {
          feasible = false;
        }
      }
      if (idx.empty()) {
        feasible = false;
      }
    }

    std::size_t t = types.size();
    while (t > 0) {
      --t;
      if (++counts[t] <= bounds.instances_of(types[t].name.text)) {
        break;
      }
      counts[t] = 0;
      if (t == 0) {
        return out;
      }
    }
    if (types.empty()) {
      return out;
    }
  }
}

struct Layout {
  std::vector<ComponentInstance> instances;
  std::vector<Configuration> configurations;
};

using ConfigFilter = std::function<bool(const std::vector<ComponentInstance>&, const Configuration&)>;

// Layouts with their configurations, keeping only those `keep` accepts.
// Throws BoundExceeded once more than `bounds.ceiling` configurations have
// been generated.
std::vector<Layout> prepare(const Pattern& pattern, const Bounds& bounds, const DataModel& model,
                            const ConfigFilter& keep = {}) {
  const auto table = build_symbol_table(pattern);
  std::vector<Layout> out;
  std::uint64_t generated = 0;
  for (auto& instances : layouts(pattern, table, bounds, model)) {
    Layout layout{std::move(instances), {}};
    for_each_configuration(table, layout.instances, model, bounds, [&](Configuration&& c) {
      if (++generated > bounds.ceiling) {
        throw BoundExceeded("the bounds admit more than " + std::to_string(bounds.ceiling) + " configurations");
      }
      if (!keep || keep(layout.instances, c)) {
        layout.configurations.push_back(std::move(c));
      }
      return true;
    });
    out.push_back(std::move(layout));
  }
  return out;
}

std::uint64_t total_traces(const std::vector<Layout>& layouts, const Bounds& bounds) {
  std::uint64_t total = 0;
  for (const auto& l : layouts) {
    std::uint64_t per_length = 1;
    for (std::size_t len = 1; len <= bounds.max_length; ++len) {
      per_length = mul(per_length, l.configurations.size());
      total = add(total, per_length);
    }
  }
  return total;
}

void check_ceiling(std::uint64_t total, const Bounds& bounds) {
  if (total > bounds.ceiling) {
    throw BoundExceeded("the bounds admit " + (total == kSaturated ? std::string("more than 2^64") : std::to_string(total)) +
                        " traces, above the ceiling of " + std::to_string(bounds.ceiling));
  }
}

// Calls `visit` with the step indices of every trace of length 1..max over
// `n` configurations, lexicographically per length. Stops when `visit`
// returns false; returns false in that case.
template <typename Visit>
bool for_each_sequence(std::size_t n, std::size_t max_length, Visit&& visit) {
  if (n == 0) {
    return true;
  }
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<std::size_t> seq(len, 0);
    while (true) {
      if (!visit(seq)) {
        return false;
      }
      std::size_t k = len;
      while (k > 0) {
        --k;
        if (++seq[k] < n) {
          break;
        }
        seq[k] = 0;
        if (k == 0) {
          goto next_length;
        }
      }
    }
  next_length:;
  }
  return true;
}

ConfigurationTrace materialize(const Layout& layout, const std::vector<std::size_t>& seq, const DataModel& model) {
  ConfigurationTrace trace;
  trace.instances = layout.instances;
  for (auto i : seq) {
    trace.steps.push_back(layout.configurations[i]);
  }
  trace.model = model;
  return trace;
}

}  // namespace

std::vector<Configuration> enumerate_configurations(const Pattern& pattern,
                                                    const std::vector<ComponentInstance>& instances,
                                                    const DataModel& model, const Bounds& bounds) {
  std::vector<Configuration> out;
  for_each_configuration(build_symbol_table(pattern), instances, model, bounds, [&](Configuration&& c) {
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

std::uint64_t count_traces(const Pattern& pattern, const Bounds& bounds, const DataModel& model) {
  return total_traces(prepare(pattern, bounds, model), bounds);
}

void enumerate_traces(const Pattern& pattern, const Bounds& bounds, const DataModel& model,
                      const std::function<bool(const ConfigurationTrace&)>& visit) {
  const auto prepared = prepare(pattern, bounds, model);
  check_ceiling(total_traces(prepared, bounds), bounds);
  for (const auto& layout : prepared) {
    const bool go_on = for_each_sequence(layout.configurations.size(), bounds.max_length,
                                         [&](const std::vector<std::size_t>& seq) {
                                           return visit(materialize(layout, seq, model));
                                         });
    if (!go_on) {
      return;
    }
  }
}

namespace {

bool temporal(const Formula& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Globally>) {
          return true;
        } else if constexpr (std::is_same_v<N, Binary>) {
          return n.op == BinaryOp::WeakUntil || temporal(*n.lhs) || temporal(*n.rhs);
        } else if constexpr (std::is_same_v<N, Negation>) {
          return temporal(*n.operand);
        } else if constexpr (std::is_same_v<N, Quantified>) {
          return temporal(*n.body);
        } else {
          return false;
        }
      },
      f.node);
}

// G(f) with f free of temporal operators holds on a trace iff it holds on
// each step taken as a one-step trace, for rigid and flexible free
// variables alike.
bool step_local(const Formula& f) {
  const auto* g = std::get_if<Globally>(&f.node);
  return g && !temporal(*g->body);
}

TraceView single(const std::vector<ComponentInstance>& instances, const Configuration& c, const DataModel& model) {
  TraceView view;
  view.instances = &instances;
  view.steps.push_back(&c);
  view.model = &model;
  return view;
}

}  // namespace

EntailmentResult check_entailment(const Pattern& pattern, const Bounds& bounds, const std::optional<DataModel>& model) {
  const DataModel m = model ? *model : default_model(pattern, bounds.carrier_size);
  const Evaluator evaluator(pattern);
  const FormulaBlock empty;
  const FormulaBlock& spec_block = pattern.arch_spec ? *pattern.arch_spec : empty;
  const FormulaBlock& guarantee_block = pattern.arch_guarantee ? *pattern.arch_guarantee : empty;
  const BlockChecker spec(evaluator, spec_block);
  const BlockChecker guarantee(evaluator, guarantee_block);

  std::vector<std::size_t> local_spec;
  std::vector<std::size_t> other_spec;
  for (std::size_t i = 0; i < spec_block.formulas.size(); ++i) {
    (step_local(*spec_block.formulas[i].formula) ? local_spec : other_spec).push_back(i);
  }
  const bool local_guarantees = std::all_of(guarantee_block.formulas.begin(), guarantee_block.formulas.end(),
                                            [](const LabeledFormula& f) { return step_local(*f.formula); });

  EntailmentResult result;
  if (bounds.max_length == 0) {
    return result;
  }
  const auto prepared =
      prepare(pattern, bounds, m, [&](const std::vector<ComponentInstance>& instances, const Configuration& c) {
        const auto view = single(instances, c, m);
        return std::all_of(local_spec.begin(), local_spec.end(), [&](std::size_t i) { return spec.holds(i, view); });
      });

  if (other_spec.empty() && local_guarantees) {
    // Every admitted trace is a sequence of admitted configurations, and it
    // violates a guarantee iff one of its steps does. The first
    // counterexample in canonical order therefore has length one.
    for (const auto& layout : prepared) {
      for (std::size_t c = 0; c < layout.configurations.size(); ++c) {
        ++result.traces_checked;
        ++result.traces_admitted;
        if (auto failed = guarantee.first_failure(single(layout.instances, layout.configurations[c], m))) {
          result.holds = false;
          result.violated = guarantee_block.formulas[*failed].label.text;
          result.counterexample = materialize(layout, {c}, m);
          return result;
        }
      }
    }
    return result;
  }

  check_ceiling(total_traces(prepared, bounds), bounds);
  for (const auto& layout : prepared) {
    TraceView view;
    view.instances = &layout.instances;
    view.model = &m;
    const bool go_on = for_each_sequence(
        layout.configurations.size(), bounds.max_length, [&](const std::vector<std::size_t>& seq) {
          ++result.traces_checked;
          view.steps.clear();
          for (auto i : seq) {
            view.steps.push_back(&layout.configurations[i]);
          }
          if (!std::all_of(other_spec.begin(), other_spec.end(), [&](std::size_t i) { return spec.holds(i, view); })) {
            return true;
          }
          ++result.traces_admitted;
          if (auto failed = guarantee.first_failure(view)) {
            result.holds = false;
            result.violated = guarantee_block.formulas[*failed].label.text;
            result.counterexample = materialize(layout, seq, m);
            return false;
          }
          return true;
        });
    if (!go_on) {
      break;
    }
  }
  return result;
}

}  // namespace factum
