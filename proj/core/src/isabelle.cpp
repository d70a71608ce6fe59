#include "factum/isabelle.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "factum/symbol_table.hpp"
#include "factum/validator.hpp"

namespace factum {

std::string import_from_environment() {
  const char* env = std::getenv("FACTUM_ISABELLE_IMPORT");
  return env && *env ? std::string(env) : std::string(kDefaultIsabelleImport);
}

NameMangling::NameMangling(const Pattern& pattern) {
  std::map<std::string, std::string> taken;  // mangled name -> what produced it
  auto claim = [&](const std::string& name, const std::string& origin) {
    auto [it, inserted] = taken.emplace(name, origin);
    if (!inserted) {
      throw GenerationError("generated name '" + name + "' is produced by both " + it->second + " and " + origin);
    }
  };
  claim("arch", "the architecture parameter");
  for (const auto& ct : pattern.component_types) {
    short_names_.emplace(ct.name.text, ct.short_name.text);
    const auto& s = ct.short_name.text;
    claim(s + "active", "activity of " + ct.name.text);
    claim(s + "cmp", "component lookup of " + ct.name.text);
    for (const auto* list : {&ct.input_ports, &ct.output_ports}) {
      for (const auto& p : *list) {
        claim(s + p.name.text, "port " + ct.name.text + "." + p.name.text);
      }
    }
  }
  for (const auto& dt : pattern.data_types) {
    for (const auto& sort : dt.sorts) {
      sorts_.emplace(dt.name.text + "." + sort.text, sort.text);
      claim(sort.text, "sort " + dt.name.text + "." + sort.text);
    }
    for (const auto& op : dt.operations) {
      claim(dt.name.text + "_" + op.name.text, "operation " + dt.name.text + "." + op.name.text);
    }
    for (const auto& pred : dt.predicates) {
      claim(dt.name.text + "_" + pred.name.text, "predicate " + dt.name.text + "." + pred.name.text);
    }
  }
}

std::string NameMangling::short_name(std::string_view type) const {
  auto it = short_names_.find(type);
  if (it == short_names_.end()) {
    throw GenerationError("unknown component type '" + std::string(type) + "'");
  }
  return it->second;
}

std::string NameMangling::active(std::string_view type) const { return short_name(type) + "active"; }
std::string NameMangling::component(std::string_view type) const { return short_name(type) + "cmp"; }
std::string NameMangling::port(std::string_view type, std::string_view port) const {
  return short_name(type) + std::string(port);
}
std::string NameMangling::id_type(std::string_view type) const { return "'" + short_name(type) + "id"; }
std::string NameMangling::component_type(std::string_view type) const { return "'" + short_name(type) + "cmp"; }
std::string NameMangling::connection(std::string_view from_type, std::string_view from_port, std::string_view to_type,
                                     std::string_view to_port) const {
  return "conn_" + port(from_type, from_port) + "_" + port(to_type, to_port);
}
std::string NameMangling::function(std::string_view qualified) const {
  std::string out(qualified);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}
std::string NameMangling::sort(std::string_view qualified) const {
  auto it = sorts_.find(qualified);
  if (it == sorts_.end()) {
    throw GenerationError("unknown sort '" + std::string(qualified) + "'");
  }
  return it->second;
}

namespace {

const char* const kAnd = " \\<and>\\<^sup>c ";
const char* const kOr = " \\<or>\\<^sup>c ";
const char* const kImplies = " \\<longrightarrow>\\<^sup>c ";
const char* const kUntil = " \\<WW>\\<^sub>c ";

class Translator {
 public:
  Translator(const FormulaBlock& block, const NameMangling& names) : scope_(block), names_(names) {}

  std::string formula(const Formula& f) {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ValAtom>) {
            const auto target = port_read(x.port);
            const bool set_valued = std::holds_alternative<PortRead>(x.value.node);
            return ca(term(x.value, false) + (set_valued ? " \\<subseteq> " : " \\<in> ") + target);
          } else if constexpr (std::is_same_v<T, CActAtom>) {
            return ca(names_.active(type_of(x.var)) + " " + x.var.name.text + " k");
          } else if constexpr (std::is_same_v<T, ConnAtom>) {
            return ca(names_.connection(type_of(x.from.var), x.from.port.text, type_of(x.to.var), x.to.port.text) + " " +
                      x.from.var.name.text + " " + x.to.var.name.text + " k");
          } else if constexpr (std::is_same_v<T, EqAtom>) {
            return ca(x.lhs.name.text + " = " + x.rhs.name.text);
          } else if constexpr (std::is_same_v<T, TermEqAtom>) {
            return ca(term(x.lhs, false) + " = " + term(x.rhs, false));
          } else if constexpr (std::is_same_v<T, PredicateAtom>) {
            std::string s = names_.function(x.predicate.spelling());
            for (const auto& a : x.args) {
              s += " " + term(a, true);
            }
            return ca(s);
          } else if constexpr (std::is_same_v<T, Negation>) {
            return "(\\<not>\\<^sup>c " + formula(*x.operand) + ")";
          } else if constexpr (std::is_same_v<T, Binary>) {
            const char* op = x.op == BinaryOp::And ? kAnd
                             : x.op == BinaryOp::Or ? kOr
                             : x.op == BinaryOp::Implies ? kImplies
                                                         : kUntil;
            std::vector<const Formula*> operands;
            if (x.op == BinaryOp::And || x.op == BinaryOp::Or) {
              flatten(f, x.op, operands);
            } else {
              operands = {x.lhs.get(), x.rhs.get()};
            }
            std::string s = "(";
            for (std::size_t i = 0; i < operands.size(); ++i) {
              s += (i ? op : "") + formula(*operands[i]);
            }
            return s + ")";
          } else if constexpr (std::is_same_v<T, Globally>) {
            return "(\\<box>\\<^sub>c " + formula(*x.body) + ")";
          } else {
            const bool exists = x.quantifier == Quantifier::Exists;
            scope_.push(x.binder);
            const auto body = formula(*x.body);
            scope_.pop();
            if (x.binder.target && x.binder.target->is_component()) {
              return std::string(exists ? "(\\<exists>\\<^sub>c " : "(\\<forall>\\<^sub>c ") + x.binder.name.text + ". " +
                     body + ")";
            }
            return std::string("(\\<lambda>t n. ") + (exists ? "\\<exists>" : "\\<forall>") + x.binder.name.text + ". " +
                   body + " t n)";
          }
        },
        f.node);
  }

 private:
  static std::string ca(const std::string& body) { return "ca (\\<lambda>k. " + body + ")"; }

  static void flatten(const Formula& f, BinaryOp op, std::vector<const Formula*>& out) {
    const auto* b = std::get_if<Binary>(&f.node);
    if (b && b->op == op) {
      flatten(*b->lhs, op, out);
      flatten(*b->rhs, op, out);
    } else {
      out.push_back(&f);
    }
  }

  std::string type_of(const VarUse& var) const {
    auto entry = scope_.lookup(var.name.text);
    if (!entry || !entry->target || !entry->target->is_component()) {
      throw GenerationError("'" + var.name.text + "' is not a component variable");
    }
    return entry->target->ref.sort.text;
  }

  std::string port_read(const PortRead& p) const {
    const auto type = type_of(p.var);
    return names_.port(type, p.port.text) + " (" + names_.component(type) + " " + p.var.name.text + " k)";
  }

  std::string term(const Term& t, bool nested) const {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PortRead>) {
            return nested ? "(" + port_read(x) + ")" : port_read(x);
          } else if constexpr (std::is_same_v<T, IdRead>) {
            return x.var.name.text;
          } else if constexpr (std::is_same_v<T, DataVar>) {
            return x.var.name.text;
          } else {
            std::string s = names_.function(x.function.spelling());
            for (const auto& a : x.args) {
              s += " " + term(a, true);
            }
            return nested && !x.args.empty() ? "(" + s + ")" : s;
          }
        },
        t.node);
  }

  VariableScope scope_;
  const NameMangling& names_;
};

// Block variables free in `f`, by first occurrence.
std::vector<const VariableDecl*> free_declared(const Formula& f, const FormulaBlock& block) {
  std::vector<const VariableDecl*> out;
  for (const auto& name : free_variables_in_order(f)) {
    if (const auto* v = block.find_variable(name)) {
      out.push_back(v);
    }
  }
  return out;
}

std::string sort_type(const VariableTarget& target, const SymbolTable& table, const NameMangling& names) {
  auto r = resolve_sort(target.ref, std::nullopt, table);
  if (!r.sort) {
    throw GenerationError("unresolved sort '" + target.ref.spelling() + "'");
  }
  return names.sort(r.sort->qualified());
}

void check_variable_names(const FormulaBlock& block) {
  static const std::set<std::string> reserved = {"t", "n", "k", "arch", "ca"};
  for (const auto& v : block.variables) {
    if (reserved.count(v.name.text)) {
      throw GenerationError("variable name '" + v.name.text + "' clashes with a name used by the generated theory");
    }
  }
}

}  // namespace

std::string translate_formula(const Formula& formula, const FormulaBlock& block, const NameMangling& names) {
  return Translator(block, names).formula(formula);
}

std::string generate_theory(const Pattern& pattern, const TheoryOptions& options) {
  const NameMangling names(pattern);
  const auto table = build_symbol_table(pattern);
  auto sort_name = [&](const SortRef& ref, std::optional<std::string_view> context) {
    auto r = resolve_sort(ref, context, table);
    if (!r.sort) {
      throw GenerationError("unresolved sort '" + ref.spelling() + "'");
    }
    return names.sort(r.sort->qualified());
  };

  std::ostringstream out;
  out << "theory " << pattern.name.text << "\n  imports " << options.import_theory << "\nbegin\n\n";

  std::vector<std::string> sorts;
  for (const auto& dt : pattern.data_types) {
    for (const auto& s : dt.sorts) {
      sorts.push_back(s.text);
    }
  }
  if (!sorts.empty()) {
    out << "(* Sorts are declared as types; operations and predicates are locale parameters. *)\n";
    for (const auto& s : sorts) {
      out << "typedecl " << s << "\n";
    }
    out << "\n";
  }

  // Locale parameters.
  std::vector<std::pair<std::string, std::string>> params;
  params.emplace_back("arch", "(nat \\<Rightarrow> 'cnf) set");
  for (const auto& ct : pattern.component_types) {
    const auto& type = ct.name.text;
    params.emplace_back(names.active(type), names.id_type(type) + " \\<Rightarrow> 'cnf \\<Rightarrow> bool");
    params.emplace_back(names.component(type),
                        names.id_type(type) + " \\<Rightarrow> 'cnf \\<Rightarrow> " + names.component_type(type));
    for (const auto* list : {&ct.input_ports, &ct.output_ports}) {
      for (const auto& p : *list) {
        params.emplace_back(names.port(type, p.name.text),
                            names.component_type(type) + " \\<Rightarrow> " + sort_name(p.sort, std::nullopt) + " set");
      }
    }
  }
  // Connection predicates: declared topology first, then pairs only used
  // in conn atoms.
  std::set<std::string> connections;
  auto add_connection = [&](const std::string& ft, const std::string& fp, const std::string& tt, const std::string& tp) {
    const auto name = names.connection(ft, fp, tt, tp);
    if (connections.insert(name).second) {
      params.emplace_back(name, names.id_type(ft) + " \\<Rightarrow> " + names.id_type(tt) +
                                    " \\<Rightarrow> 'cnf \\<Rightarrow> bool");
    }
  };
  for (const auto& ct : pattern.component_types) {
    for (const auto& p : ct.output_ports) {
      for (const auto& target : p.connects) {
        add_connection(ct.name.text, p.name.text, target.component_type.text, target.port.text);
      }
    }
  }
  for (const auto* block : {pattern.arch_spec ? &*pattern.arch_spec : nullptr,
                            pattern.arch_guarantee ? &*pattern.arch_guarantee : nullptr}) {
    if (!block) {
      continue;
    }
    check_variable_names(*block);
    for (const auto& lf : block->formulas) {
      VariableScope scope(*block);
      std::function<void(const Formula&)> collect = [&](const Formula& f) {
        std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, ConnAtom>) {
                auto a = scope.lookup(x.from.var.name.text);
                auto b = scope.lookup(x.to.var.name.text);
                if (a && b && a->target && b->target) {
                  add_connection(a->target->ref.sort.text, x.from.port.text, b->target->ref.sort.text, x.to.port.text);
                }
              } else if constexpr (std::is_same_v<T, Negation>) {
                collect(*x.operand);
              } else if constexpr (std::is_same_v<T, Binary>) {
                collect(*x.lhs);
                collect(*x.rhs);
              } else if constexpr (std::is_same_v<T, Globally>) {
                collect(*x.body);
              } else if constexpr (std::is_same_v<T, Quantified>) {
                scope.push(x.binder);
                collect(*x.body);
                scope.pop();
              }
            },
            f.node);
      };
      collect(*lf.formula);
    }
  }
  for (const auto& dt : pattern.data_types) {
    for (const auto& op : dt.operations) {
      std::string type;
      for (const auto& a : op.arg_sorts) {
        type += sort_name(a, dt.name.text) + " \\<Rightarrow> ";
      }
      params.emplace_back(names.function(dt.name.text + "." + op.name.text), type + sort_name(op.result_sort, dt.name.text));
    }
    for (const auto& pred : dt.predicates) {
      std::string type;
      for (const auto& a : pred.arg_sorts) {
        type += sort_name(a, dt.name.text) + " \\<Rightarrow> ";
      }
      params.emplace_back(names.function(dt.name.text + "." + pred.name.text), type + "bool");
    }
  }

  out << "locale " << pattern.short_name.text << " =\n";
  for (std::size_t i = 0; i < params.size(); ++i) {
    out << (i ? "    and " : "  fixes ") << params[i].first << " :: \"" << params[i].second << "\"\n";
  }
  if (pattern.arch_spec) {
    const auto& block = *pattern.arch_spec;
    for (std::size_t i = 0; i < block.formulas.size(); ++i) {
      const auto& lf = block.formulas[i];
      std::string binders = "t";
      for (const auto* v : free_declared(*lf.formula, block)) {
        binders += " " + v->name.text;
      }
      out << (i ? "    and " : "  assumes ") << lf.label.text << ": \"\\<And>" << binders
          << ". t \\<in> arch \\<Longrightarrow> " << translate_formula(*lf.formula, block, names) << " t 0\"\n";
    }
  }

  if (pattern.arch_guarantee && !pattern.arch_guarantee->formulas.empty()) {
    const auto& block = *pattern.arch_guarantee;
    out << "\ncontext " << pattern.short_name.text << "\nbegin\n";
    for (const auto& lf : block.formulas) {
      std::string fixes = "t";
      for (const auto* v : free_declared(*lf.formula, block)) {
        if (v->target.is_component()) {
          fixes += " and " + v->name.text + "::" + names.id_type(v->target.ref.sort.text);
        } else if (v->kind == VariableKind::Rigid) {
          fixes += " and " + v->name.text + "::" + sort_type(v->target, table, names);
        }
      }
      out << "\n(* Architectural Guarantee Assertion *)\n"
          << "theorem " << lf.label.text << ":\n"
          << "  fixes " << fixes << "\n"
          << "  assumes \"t \\<in> arch\"\n"
          << "  shows \"" << translate_formula(*lf.formula, block, names) << "\"\n"
          << "  oops\n";
    }
    out << "\nend\n";
  }
  out << "\nend\n";
  return options.unicode ? to_unicode(out.str()) : out.str();
}

std::string to_unicode(std::string_view ascii) {
  static const std::map<std::string, std::string, std::less<>> symbols = {
      {"\\<in>", "∈"},       {"\\<subseteq>", "⊆"},      {"\\<Rightarrow>", "⇒"},     {"\\<Longrightarrow>", "⟹"},
      {"\\<And>", "⋀"},      {"\\<lambda>", "λ"},        {"\\<box>", "□"},            {"\\<and>", "∧"},
      {"\\<or>", "∨"},       {"\\<not>", "¬"},           {"\\<longrightarrow>", "⟶"}, {"\\<exists>", "∃"},
      {"\\<forall>", "∀"},   {"\\<^sub>", "⇩"},          {"\\<^sup>", "⇧"},
  };
  std::string out;
  std::size_t i = 0;
  while (i < ascii.size()) {
    if (ascii.compare(i, 2, "\\<") == 0) {
      const auto close = ascii.find('>', i);
      if (close != std::string_view::npos) {
        auto it = symbols.find(ascii.substr(i, close - i + 1));
        if (it != symbols.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += ascii[i++];
  }
  return out;
}

GoldenReport golden_compare(const Pattern& pattern, const std::string& golden_path, const TheoryOptions& options) {
  std::ifstream in(golden_path, std::ios::binary);
  if (!in) {
    throw GenerationError("cannot read golden file '" + golden_path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto expected = buffer.str();
  const auto actual = generate_theory(pattern, options);
  GoldenReport report;
  report.match = expected == actual;
  if (!report.match) {
    report.diff = unified_diff(expected, actual, golden_path, "generated");
  }
  return report;
}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start + 1));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::string unified_diff(std::string_view expected, std::string_view actual, std::string_view expected_name,
                         std::string_view actual_name) {
  const auto a = lines_of(expected);
  const auto b = lines_of(actual);
  // LCS table over suffixes.
  std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = a.size(); i-- > 0;) {
    for (std::size_t j = b.size(); j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  struct Edit {
    char kind;  // ' ', '-', '+'
    std::size_t a_line;
    std::size_t b_line;
    std::string_view text;
  };
  std::vector<Edit> edits;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i] == b[j]) {
      edits.push_back({' ', i, j, a[i]});
      ++i;
      ++j;
    } else if (i < a.size() && (j == b.size() || lcs[i + 1][j] >= lcs[i][j + 1])) {
      edits.push_back({'-', i, j, a[i]});
      ++i;
    } else {
      edits.push_back({'+', i, j, b[j]});
      ++j;
    }
  }
  if (std::all_of(edits.begin(), edits.end(), [](const Edit& e) { return e.kind == ' '; })) {
    return {};
  }

  constexpr std::size_t kContext = 3;
  std::string out = "--- " + std::string(expected_name) + "\n+++ " + std::string(actual_name) + "\n";
  std::size_t k = 0;
  while (k < edits.size()) {
    while (k < edits.size() && edits[k].kind == ' ') {
      ++k;
    }
    if (k == edits.size()) {
      break;
    }
    std::size_t begin = k >= kContext ? k - kContext : 0;
    std::size_t end = k;
    // Extend the hunk while changes are within 2 * context lines.
    std::size_t last_change = k;
    while (end < edits.size()) {
      if (edits[end].kind != ' ') {
        last_change = end;
      } else if (end - last_change > 2 * kContext) {
        break;
      }
      ++end;
    }
    end = std::min(edits.size(), last_change + kContext + 1);
    std::size_t a_count = 0, b_count = 0;
    for (std::size_t e = begin; e < end; ++e) {
      a_count += edits[e].kind != '+';
      b_count += edits[e].kind != '-';
    }
    const std::size_t a_start = edits[begin].a_line + (a_count ? 1 : 0);
    const std::size_t b_start = edits[begin].b_line + (b_count ? 1 : 0);
    out += "@@ -" + std::to_string(a_start) + "," + std::to_string(a_count) + " +" + std::to_string(b_start) + "," +
           std::to_string(b_count) + " @@\n";
    for (std::size_t e = begin; e < end; ++e) {
      out += edits[e].kind;
      out += edits[e].text;
      if (edits[e].text.empty() || edits[e].text.back() != '\n') {
        out += "\n\\ No newline at end of file\n";
      }
    }
    k = end;
  }
  return out;
}

}  // namespace factum
