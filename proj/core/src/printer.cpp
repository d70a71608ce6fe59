#include "factum/printer.hpp"

#include <sstream>

namespace factum {

namespace {

// Binding strength used to decide where parentheses are required. Prefix
// operators with maximal scope (G, ∀, ∃) bind loosest of all, so they are
// parenthesised whenever they appear as an operand.
enum Precedence : int { kPrefix = 0, kUntil = 1, kImplies = 2, kOr = 3, kAnd = 4, kNot = 5, kAtom = 6 };

int precedence(const Formula& f) {
  if (const auto* b = std::get_if<Binary>(&f.node)) {
    switch (b->op) {
      case BinaryOp::WeakUntil:
        return kUntil;
      case BinaryOp::Implies:
        return kImplies;
      case BinaryOp::Or:
        return kOr;
      case BinaryOp::And:
        return kAnd;
    }
  }
  if (std::holds_alternative<Negation>(f.node)) {
    return kNot;
  }
  if (std::holds_alternative<Globally>(f.node) || std::holds_alternative<Quantified>(f.node)) {
    return kPrefix;
  }
  return kAtom;
}

void print(const Term& term, std::string& out);

void print_args(const std::vector<Term>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) {
      out += ", ";
    }
    print(args[i], out);
  }
  out += ')';
}

void print(const PortRead& p, std::string& out) { out += p.var.name.text + "." + p.port.text; }

void print(const Term& term, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PortRead>) {
          print(x, out);
        } else if constexpr (std::is_same_v<T, IdRead>) {
          out += x.var.name.text + ".id";
        } else if constexpr (std::is_same_v<T, DataVar>) {
          out += x.var.name.text;
        } else {
          out += x.function.spelling();
          print_args(x.args, out);
        }
      },
      term.node);
}

void print(const Formula& f, int min_prec, std::string& out);

void print_operand(const Formula& f, int min_prec, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    print(f, kPrefix, out);
    out += ')';
  } else {
    print(f, min_prec, out);
  }
}

void print(const Formula& f, int /*min_prec*/, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValAtom>) {
          out += "val(";
          print(x.port, out);
          out += ", ";
          print(x.value, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, CActAtom>) {
          out += "cAct(" + x.var.name.text + ")";
        } else if constexpr (std::is_same_v<T, ConnAtom>) {
          out += "conn(";
          print(x.from, out);
          out += ", ";
          print(x.to, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, EqAtom>) {
          out += "eq(" + x.lhs.name.text + ", " + x.rhs.name.text + ")";
        } else if constexpr (std::is_same_v<T, TermEqAtom>) {
          print(x.lhs, out);
          out += " = ";
          print(x.rhs, out);
        } else if constexpr (std::is_same_v<T, PredicateAtom>) {
          out += x.predicate.spelling();
          print_args(x.args, out);
        } else if constexpr (std::is_same_v<T, Negation>) {
          out += '!';
          print_operand(*x.operand, kNot, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          // And/Or associate to the left, Implies and W to the right.
          int op_prec = kAnd;
          const char* spelling = " ^ ";
          bool right_assoc = false;
          switch (x.op) {
            case BinaryOp::And:
              break;
            case BinaryOp::Or:
              op_prec = kOr;
              spelling = " | ";
              break;
            case BinaryOp::Implies:
              op_prec = kImplies;
              spelling = " => ";
              right_assoc = true;
              break;
            case BinaryOp::WeakUntil:
              op_prec = kUntil;
              spelling = " W ";
              right_assoc = true;
              break;
          }
          print_operand(*x.lhs, right_assoc ? op_prec + 1 : op_prec, out);
          out += spelling;
          print_operand(*x.rhs, right_assoc ? op_prec : op_prec + 1, out);
        } else if constexpr (std::is_same_v<T, Globally>) {
          out += "G(";
          print(*x.body, kPrefix, out);
          out += ')';
        } else {
          out += x.quantifier == Quantifier::Exists ? "exists " : "forall ";
          out += x.binder.name.text;
          if (x.binder.annotated && x.binder.target) {
            out += ": " + x.binder.target->spelling();
          }
          out += ". ";
          print(*x.body, kPrefix, out);
        }
      },
      f.node);
}

class PatternPrinter {
 public:
  std::string run(const Pattern& p) {
    pattern(p, 0);
    return out_.str();
  }

 private:
  std::string indent(int level) const { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

  static std::string join_sorts(const std::vector<SortRef>& sorts) {
    std::string s;
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      s += (i ? ", " : "") + sorts[i].spelling();
    }
    return s;
  }

  void pattern(const Pattern& p, int level) {
    const auto in = indent(level);
    out_ << "Pattern " << p.name.text << " ShortName " << p.short_name.text << " {";
    const bool empty = p.data_types.empty() && p.component_types.empty() && !p.arch_spec &&
                       !p.arch_guarantee && p.sub_patterns.empty();
    if (empty) {
      out_ << " }";
      return;
    }
    out_ << '\n';
    if (!p.data_types.empty()) {
      out_ << in << "  DTSpec {\n";
      for (std::size_t i = 0; i < p.data_types.size(); ++i) {
        data_type(p.data_types[i], level + 2);
        out_ << (i + 1 < p.data_types.size() ? ",\n" : "\n");
      }
      out_ << in << "  }\n";
    }
    if (!p.component_types.empty()) {
      out_ << in << "  CTypes {\n";
      for (std::size_t i = 0; i < p.component_types.size(); ++i) {
        component_type(p.component_types[i], level + 2);
        out_ << (i + 1 < p.component_types.size() ? ",\n" : "\n");
      }
      out_ << in << "  }\n";
    }
    if (p.arch_spec) {
      block("ArchSpec", *p.arch_spec, level + 1);
    }
    if (p.arch_guarantee) {
      block("ArchGuarantee", *p.arch_guarantee, level + 1);
    }
    if (!p.sub_patterns.empty()) {
      out_ << in << "  SubPattern {\n";
      for (std::size_t i = 0; i < p.sub_patterns.size(); ++i) {
        out_ << indent(level + 2);
        pattern(p.sub_patterns[i], level + 2);
        out_ << (i + 1 < p.sub_patterns.size() ? ",\n" : "\n");
      }
      out_ << in << "  }\n";
    }
    out_ << in << "}";
  }

  void data_type(const DataTypeSpec& dt, int level) {
    const auto in = indent(level);
    out_ << in << "DT " << dt.name.text << " (\n";
    if (!dt.sorts.empty()) {
      out_ << in << "  Sort ";
      for (std::size_t i = 0; i < dt.sorts.size(); ++i) {
        out_ << (i ? ", " : "") << dt.sorts[i].text;
      }
      out_ << '\n';
    }
    if (!dt.operations.empty()) {
      out_ << in << "  Operation ";
      for (std::size_t i = 0; i < dt.operations.size(); ++i) {
        const auto& op = dt.operations[i];
        if (i) {
          out_ << ",\n" << in << "    ";
        }
        out_ << op.name.text << ": " << join_sorts(op.arg_sorts) << (op.arg_sorts.empty() ? "" : " ")
             << "=> " << op.result_sort.spelling();
      }
      out_ << '\n';
    }
    if (!dt.predicates.empty()) {
      out_ << in << "  Predicate ";
      for (std::size_t i = 0; i < dt.predicates.size(); ++i) {
        const auto& pred = dt.predicates[i];
        if (i) {
          out_ << ",\n" << in << "    ";
        }
        out_ << pred.name.text << ": " << join_sorts(pred.arg_sorts);
      }
      out_ << '\n';
    }
    out_ << in << ")";
  }

  void ports(const char* list_kw, const char* port_kw, const std::vector<Port>& list, int level) {
    const auto in = indent(level);
    out_ << in << list_kw << " {";
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& port = list[i];
      out_ << (i ? ", " : " ") << port_kw << ' ' << port.name.text << "(Type: " << port.sort.spelling();
      if (!port.connects.empty()) {
        out_ << " connects ";
        for (std::size_t j = 0; j < port.connects.size(); ++j) {
          out_ << (j ? ", " : "") << port.connects[j].component_type.text << '.' << port.connects[j].port.text;
        }
      }
      out_ << ')';
    }
    out_ << " }\n";
  }

  void component_type(const ComponentType& ct, int level) {
    const auto in = indent(level);
    out_ << in << "CType " << ct.name.text << " ShortName " << ct.short_name.text << " {";
    if (!ct.id_sort && ct.input_ports.empty() && ct.output_ports.empty()) {
      out_ << " }";
      return;
    }
    out_ << '\n';
    if (ct.id_sort) {
      out_ << in << "  Id(Type: " << ct.id_sort->spelling() << ")\n";
    }
    if (!ct.input_ports.empty()) {
      ports("InputPorts", "InputPort", ct.input_ports, level + 1);
    }
    if (!ct.output_ports.empty()) {
      ports("OutputPorts", "OutputPort", ct.output_ports, level + 1);
    }
    out_ << in << "}";
  }

  void block(const char* keyword, const FormulaBlock& b, int level) {
    const auto in = indent(level);
    out_ << in << keyword << " {";
    if (b.variables.empty() && b.formulas.empty()) {
      out_ << " }\n";
      return;
    }
    out_ << '\n';
    for (std::size_t i = 0; i < b.variables.size(); ++i) {
      const auto& v = b.variables[i];
      out_ << in << "  " << (v.kind == VariableKind::Rigid ? "rig " : "flex ") << v.name.text << " : "
           << v.target.spelling() << (i + 1 < b.variables.size() ? ",\n" : "\n");
    }
    if (!b.variables.empty() && !b.formulas.empty()) {
      out_ << '\n';
    }
    for (const auto& lf : b.formulas) {
      out_ << in << "  " << lf.label.text << ": " << print_formula(*lf.formula) << '\n';
    }
    out_ << in << "}\n";
  }

  std::ostringstream out_;
};

}  // namespace

std::string print_term(const Term& term) {
  std::string out;
  print(term, out);
  return out;
}

std::string print_formula(const Formula& formula) {
  std::string out;
  print(formula, kPrefix, out);
  return out;
}

std::string pretty_print(const Pattern& pattern) { return PatternPrinter().run(pattern) + "\n"; }

}  // namespace factum
