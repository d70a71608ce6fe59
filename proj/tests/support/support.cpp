#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "factum/eval.hpp"
#include "factum/isabelle.hpp"
#include "factum/parser.hpp"
#include "factum/printer.hpp"
#include "factum/validator.hpp"

namespace factum::testing {

std::string fixture_path(std::string_view name) { return std::string(FACTUM_TEST_DATA_DIR) + "/fixtures/" + std::string(name); }

std::string golden_path(std::string_view name) { return std::string(FACTUM_TEST_DATA_DIR) + "/golden/" + std::string(name); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Pattern load_fixture(std::string_view name) {
  const auto path = fixture_path(name);
  auto r = parse_pattern(read_file(path), path);
  if (!r.ok()) {
    throw std::runtime_error(path + " does not parse:\n" + render(r.diagnostics));
  }
  return std::move(*r.pattern);
}

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// ---------------------------------------------------------------- patterns

struct PatternGen {
  explicit PatternGen(std::mt19937& r) : rng(r) {}

  std::mt19937& rng;
  Pattern p;
  std::vector<std::string> sorts;  // qualified
  std::vector<std::pair<std::string, std::size_t>> ops;
  std::vector<std::pair<std::string, std::size_t>> preds;
  std::vector<std::pair<std::string, std::optional<VariableTarget>>> scope;

  SortRef sort_ref() {
    const auto& q = sorts[pick(rng, sorts.size())];
    return coin(rng) ? build::sort(q) : build::sort(q.substr(q.find('.') + 1));
  }

  VariableTarget target() {
    if (!p.component_types.empty() && coin(rng)) {
      return build::component(p.component_types[pick(rng, p.component_types.size())].name.text);
    }
    return VariableTarget{VariableTarget::Kind::Data, sort_ref()};
  }

  std::string var() {
    if (!scope.empty() && coin(rng, 0.7)) {
      return scope[pick(rng, scope.size())].first;
    }
    return "x" + std::to_string(pick(rng, 4));
  }

  std::string port() { return (coin(rng) ? "i" : "o") + std::to_string(pick(rng, 2)); }

  Term term(int depth) {
    const auto k = pick(rng, depth > 0 && !ops.empty() ? 4 : 3);
    if (k == 0) {
      return build::port_term(var(), port());
    }
    if (k == 1) {
      return build::id(var());
    }
    if (k == 2) {
      return build::var(var());
    }
    const auto& [name, arity] = ops[pick(rng, ops.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) {
      args.push_back(term(depth - 1));
    }
    return build::app(name, std::move(args));
  }

  FormulaPtr atom() {
    switch (pick(rng, preds.empty() ? 5 : 6)) {
      case 0:
        return build::val(build::port(var(), port()), term(2));
      case 1:
        return build::cact(var());
      case 2:
        return build::conn(build::port(var(), port()), build::port(var(), port()));
      case 3:
        return build::eq(var(), var());
      case 4:
        return build::term_eq(term(2), term(2));
      default: {
        const auto& [name, arity] = preds[pick(rng, preds.size())];
        std::vector<Term> args;
        for (std::size_t i = 0; i < arity; ++i) {
          args.push_back(term(1));
        }
        return build::pred(name, std::move(args));
      }
    }
  }

  std::optional<VariableTarget> lookup(const std::string& name) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == name) {
        return it->second;
      }
    }
    return std::nullopt;
  }

  FormulaPtr formula(int depth) {
    if (depth == 0) {
      return atom();
    }
    switch (pick(rng, 6)) {
      case 0:
        return atom();
      case 1:
        return build::negate(formula(depth - 1));
      case 2: {
        static constexpr BinaryOp kOps[] = {BinaryOp::And, BinaryOp::Or, BinaryOp::Implies, BinaryOp::WeakUntil};
        return build::binary(kOps[pick(rng, 4)], formula(depth - 1), formula(depth - 1));
      }
      case 3:
        return build::globally(formula(depth - 1));
      default: {
        const bool exists = coin(rng);
        std::string name = "y" + std::to_string(pick(rng, 3));
        std::optional<VariableTarget> t;
        bool annotated = coin(rng);
        if (annotated) {
          t = target();
        } else {
          if (!scope.empty() && coin(rng)) {
            name = scope[pick(rng, scope.size())].first;
          }
          t = lookup(name);
        }
        scope.emplace_back(name, t);
        auto body = formula(depth - 1);
        scope.pop_back();
        return exists ? build::exists(name, t, std::move(body), annotated)
                      : build::forall(name, t, std::move(body), annotated);
      }
    }
  }

  FormulaBlock make_block() {
    FormulaBlock b;
    const auto n = pick(rng, 4);
    for (std::size_t i = 0; i < n; ++i) {
      auto name = "x" + std::to_string(i);
      b.variables.push_back(coin(rng) ? build::rig(name, target()) : build::flex(name, target()));
    }
    for (const auto& v : b.variables) {
      scope.emplace_back(v.name.text, v.target);
    }
    const auto m = pick(rng, 4);
    for (std::size_t i = 0; i < m; ++i) {
      b.formulas.push_back({build::name("l" + std::to_string(i)), formula(static_cast<int>(pick(rng, 5)))});
    }
    scope.clear();
    return b;
  }

  Pattern make() {
    p.name = build::name("P" + std::to_string(pick(rng, 100)));
    p.short_name = build::name("p" + std::to_string(pick(rng, 10)));
    const auto dts = pick(rng, 3) + (coin(rng, 0.8) ? 1 : 0);
    for (std::size_t d = 0; d < dts; ++d) {
      DataTypeSpec dt;
      dt.name = build::name("D" + std::to_string(d));
      const auto ns = 1 + pick(rng, 3);
      for (std::size_t s = 0; s < ns; ++s) {
        dt.sorts.push_back(build::name("a" + std::to_string(d) + std::to_string(s)));
        sorts.push_back(dt.name.text + "." + dt.sorts.back().text);
      }
      p.data_types.push_back(std::move(dt));
    }
    for (std::size_t d = 0; d < p.data_types.size(); ++d) {
      auto& dt = p.data_types[d];
      for (std::size_t o = 0, no = pick(rng, 3); o < no; ++o) {
        OperationSig op;
        op.name = build::name("f" + std::to_string(o));
        for (std::size_t a = 0, na = pick(rng, 4); a < na; ++a) {
          op.arg_sorts.push_back(sort_ref());
        }
        op.result_sort = sort_ref();
        ops.emplace_back(dt.name.text + "." + op.name.text, op.arg_sorts.size());
        dt.operations.push_back(std::move(op));
      }
      for (std::size_t r = 0, nr = pick(rng, 3); r < nr; ++r) {
        PredicateSig pr;
        pr.name = build::name("q" + std::to_string(r));
        for (std::size_t a = 0, na = 1 + pick(rng, 2); a < na; ++a) {
          pr.arg_sorts.push_back(sort_ref());
        }
        preds.emplace_back(dt.name.text + "." + pr.name.text, pr.arg_sorts.size());
        dt.predicates.push_back(std::move(pr));
      }
    }
    const auto cts = pick(rng, 4);
    for (std::size_t c = 0; c < cts; ++c) {
      ComponentType ct;
      ct.name = build::name("T" + std::to_string(c));
      ct.short_name = build::name("t" + std::to_string(c));
      p.component_types.push_back(std::move(ct));
    }
    for (auto& ct : p.component_types) {
      if (!sorts.empty() && coin(rng, 0.3)) {
        ct.id_sort = sort_ref();
      }
      for (std::size_t i = 0, ni = sorts.empty() ? 0 : pick(rng, 3); i < ni; ++i) {
        ct.input_ports.push_back({build::name("i" + std::to_string(i)), PortDirection::Input, sort_ref(), {}});
      }
      for (std::size_t o = 0, no = sorts.empty() ? 0 : pick(rng, 3); o < no; ++o) {
        Port port{build::name("o" + std::to_string(o)), PortDirection::Output, sort_ref(), {}};
        for (std::size_t k = 0, nk = pick(rng, 3); k < nk; ++k) {
          port.connects.push_back({build::name(p.component_types[pick(rng, cts)].name.text),
                                   build::name("i" + std::to_string(pick(rng, 2)))});
        }
        ct.output_ports.push_back(std::move(port));
      }
    }
    if (!sorts.empty()) {
      if (coin(rng, 0.7)) {
        p.arch_spec = make_block();
      }
      if (coin(rng, 0.7)) {
        p.arch_guarantee = make_block();
      }
    }
    return std::move(p);
  }
};

// ---------------------------------------------------------------- e-Car laws

struct EcarFormulas {
  std::mt19937& rng;

  FormulaPtr atom() {
    static const char* kSwitches[] = {"sw", "y"};
    const std::string s = kSwitches[pick(rng, 2)];
    switch (pick(rng, 8)) {
      case 0:
        return build::cact(std::vector<std::string>{"c", "p", "sw"}[pick(rng, 3)]);
      case 1:
        return build::val(build::port("p", "po"), build::var("e"));
      case 2:
        return build::val(build::port(s, "si"), build::var("e"));
      case 3:
        return build::val(build::port(s, "so"), build::var("e"));
      case 4:
        return build::val(build::port("c", "ci"), build::var("e"));
      case 5:
        return build::conn(build::port("p", "po"), build::port(s, "si"));
      case 6:
        return build::conn(build::port(s, "so"), build::port("c", "ci"));
      default:
        return build::term_eq(build::port_term("p", "po"), build::port_term(s, "so"));
    }
  }

  // `y` is only used under a binder for it.
  FormulaPtr formula(int depth, bool y_bound = false) {
    if (depth == 0) {
      FormulaPtr a;
      do {
        a = atom();
      } while (!y_bound && mentions_y(*a));
      return a;
    }
    switch (pick(rng, 6)) {
      case 0:
        return formula(0, y_bound);
      case 1:
        return build::negate(formula(depth - 1, y_bound));
      case 2: {
        static constexpr BinaryOp kOps[] = {BinaryOp::And, BinaryOp::Or, BinaryOp::Implies, BinaryOp::WeakUntil};
        return build::binary(kOps[pick(rng, 4)], formula(depth - 1, y_bound), formula(depth - 1, y_bound));
      }
      case 3:
        return build::globally(formula(depth - 1, y_bound));
      case 4:
        return build::exists("y", build::component("Switch"), formula(depth - 1, true));
      default:
        return build::forall("y", build::component("Switch"), formula(depth - 1, true));
    }
  }

  static bool mentions_y(const Formula& f) { return free_variables(f).count("y") > 0; }
};

}  // namespace

Pattern random_pattern(std::mt19937& rng) { return PatternGen(rng).make(); }

ConfigurationTrace random_ecar_trace(std::mt19937& rng, std::size_t max_length) {
  ConfigurationTrace t;
  t.instances = {{"c1", "Car", std::nullopt},
                 {"p1", "Power", std::nullopt},
                 {"s1", "Switch", std::nullopt},
                 {"s2", "Switch", std::nullopt}};
  t.model.carriers["Energy.energy"] = {"en0", "en1"};
  const std::vector<std::vector<Value>> subsets = {{}, {"en0"}, {"en1"}, {"en0", "en1"}};
  const auto length = 1 + pick(rng, max_length);
  for (std::size_t i = 0; i < length; ++i) {
    Configuration c;
    for (std::size_t k = 0; k < 4; ++k) {
      if (coin(rng, 0.7)) {
        c.active.insert(k);
      }
    }
    auto value = [&](std::size_t instance, const char* port) {
      const auto& s = subsets[pick(rng, subsets.size())];
      if (c.active.count(instance) && !s.empty()) {
        c.valuations[{instance, port}] = ValueSet(s.begin(), s.end());
      }
    };
    value(0, "ci");
    value(1, "po");
    for (std::size_t sw : {2, 3}) {
      value(sw, "si");
      value(sw, "so");
      if (c.active.count(1) && c.active.count(sw) && coin(rng)) {
        c.connections.insert({{1, "po"}, {sw, "si"}});
      }
      if (c.active.count(0) && c.active.count(sw) && coin(rng)) {
        c.connections.insert({{sw, "so"}, {0, "ci"}});
      }
    }
    t.steps.push_back(std::move(c));
  }
  return t;
}

std::string check_round_trip(std::uint32_t seed, std::size_t cases) {
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto pattern = random_pattern(rng);
    const auto text = pretty_print(pattern);
    auto r = parse_pattern(text);
    if (!r.ok()) {
      return "case " + std::to_string(i) + ": printed pattern does not parse\n" + text + render(r.diagnostics);
    }
    if (!structurally_equal(pattern, *r.pattern)) {
      return "case " + std::to_string(i) + ": reparsed pattern differs\n" + text + "---\n" + pretty_print(*r.pattern);
    }
    if (pretty_print(*r.pattern) != text) {
      return "case " + std::to_string(i) + ": printing is not idempotent\n" + text;
    }
  }
  return "";
}

std::string check_ltl_laws(std::uint32_t seed, std::size_t cases) {
  std::mt19937 rng(seed);
  const auto pattern = load_fixture("ecar.pmodel");
  const Evaluator ev(pattern);
  EcarFormulas gen{rng};
  for (std::size_t i = 0; i < cases; ++i) {
    const auto trace = random_ecar_trace(rng);
    const auto view = TraceView::of(trace);
    Assignment a;
    a.rigid["c"] = std::size_t{0};
    a.rigid["p"] = std::size_t{1};
    a.rigid["sw"] = std::size_t{2 + pick(rng, 2)};
    a.rigid["e"] = Value(coin(rng) ? "en0" : "en1");
    const auto phi = gen.formula(3);
    const auto psi = gen.formula(3);
    const auto until = build::wuntil(phi, psi);
    const auto g_and = build::globally(build::conj(phi, psi));
    const auto gg = build::globally(build::globally(phi));
    const auto g = build::globally(phi);
    auto at = [&](const FormulaPtr& f, std::size_t time) { return ev.eval(*f, view, time, a); };
    const auto fail = [&](const std::string& law, std::size_t time) {
      return "case " + std::to_string(i) + " at " + std::to_string(time) + ": " + law + " fails for phi = " +
             print_formula(*phi) + ", psi = " + print_formula(*psi);
    };
    for (std::size_t t = 0; t < view.length(); ++t) {
      if (at(g_and, t) != (at(g, t) && at(build::globally(psi), t))) {
        return fail("G distributes over ^", t);
      }
      const bool next = t + 1 == view.length() || at(until, t + 1);
      if (at(until, t) != (at(psi, t) || (at(phi, t) && next))) {
        return fail("W unfolding", t);
      }
      if (at(psi, t) && !at(until, t)) {
        return fail("psi now implies phi W psi", t);
      }
      if (at(g, t) && !at(until, t)) {
        return fail("G phi implies phi W psi", t);
      }
      if (at(gg, t) != at(g, t)) {
        return fail("G G phi = G phi", t);
      }
      if (at(build::negate(build::negate(phi)), t) != at(phi, t)) {
        return fail("double negation", t);
      }
    }
  }
  return "";
}

std::string check_determinism(std::uint32_t seed, std::size_t cases) {
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto pattern = random_pattern(rng);
    const auto a = validate(pattern);
    const auto b = validate(pattern);
    if (render(a.diagnostics) != render(b.diagnostics) || a.ok != b.ok) {
      return "case " + std::to_string(i) + ": validate is not deterministic\n" + pretty_print(pattern);
    }
  }
  for (const char* name : {"ecar.pmodel", "pubsub.pmodel"}) {
    const auto p1 = load_fixture(name);
    const auto p2 = load_fixture(name);
    if (generate_theory(p1) != generate_theory(p2) || generate_theory(p1) != generate_theory(p1)) {
      return std::string(name) + ": generate_theory is not deterministic";
    }
    if (render(validate(p1).diagnostics) != render(validate(p2).diagnostics)) {
      return std::string(name) + ": validate is not deterministic";
    }
  }
  return "";
}

std::string check_fuzz(std::uint32_t seed, std::size_t cases) {
  static const std::vector<std::string> kTokens = {
      "Pattern", "ShortName", "DTSpec", "DT", "Sort", "Operation", "Predicate", "CTypes", "CType", "InputPorts",
      "InputPort", "OutputPorts", "OutputPort", "Type", "connects", "Id", "ArchSpec", "ArchGuarantee",
      "SubPattern", "rig", "flex", "G", "W", "cAct", "conn", "val", "eq", "x", "p.q", "Vx.", "∀", "∃", "¬",
      "∧", "∨", "⇒", "=>", "->", "^", "|", "!", "(", ")", "{", "}", ",", ":", ".", "=", "//", "/*", "*/",
      " ", "\n", "\"", "\xff", "\xe2\x88", "0", "exists", "forall"};
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    std::string input;
    const auto length = pick(rng, 256);
    if (i % 2 == 0) {
      for (std::size_t k = 0; k < length; ++k) {
        input.push_back(static_cast<char>(pick(rng, 256)));
      }
    } else {
      for (std::size_t k = 0; k < length / 4; ++k) {
        input += kTokens[pick(rng, kTokens.size())];
      }
    }
    try {
      auto r = parse_pattern(input, "fuzz");
      if (!r.ok() && !has_errors(r.diagnostics)) {
        return "case " + std::to_string(i) + ": rejected without an error diagnostic";
      }
      if (r.ok()) {
        validate(*r.pattern);
        pretty_print(*r.pattern);
      }
    } catch (const std::exception& e) {
      return "case " + std::to_string(i) + ": threw " + e.what();
    }
  }
  return "";
}

}  // namespace factum::testing
