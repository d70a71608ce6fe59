#include <gtest/gtest.h>

#include "factum/parser.hpp"
#include "factum/printer.hpp"
#include "support.hpp"

namespace factum {
namespace {

FormulaPtr formula(std::string_view text, FormulaScope scope = {}) {
  auto r = parse_formula(text, scope);
  EXPECT_TRUE(r.formula) << render(r.diagnostics);
  return r.formula;
}

TEST(Parser, EcarFixture) {
  const auto p = testing::load_fixture("ecar.pmodel");
  EXPECT_EQ(p.name.text, "HeallingConn");
  EXPECT_EQ(p.short_name.text, "hc");
  ASSERT_EQ(p.data_types.size(), 1u);
  EXPECT_EQ(p.data_types[0].sorts[0].text, "energy");
  ASSERT_EQ(p.component_types.size(), 3u);
  EXPECT_EQ(p.component_types[2].name.text, "Switch");
  EXPECT_EQ(p.component_types[2].input_ports[0].name.text, "si");
  ASSERT_TRUE(p.arch_spec);
  ASSERT_EQ(p.arch_spec->formulas.size(), 2u);
  EXPECT_EQ(p.arch_spec->formulas[1].label.text, "healing");
  ASSERT_TRUE(p.arch_guarantee);
  EXPECT_EQ(p.arch_guarantee->variables.size(), 3u);
}

TEST(Parser, GloballyTakesTheMaximalBody) {
  const auto p = testing::load_fixture("ecar.pmodel");
  const auto& delivery = *p.arch_guarantee->formulas[0].formula;
  const auto* g = std::get_if<Globally>(&delivery.node);
  ASSERT_TRUE(g);
  const auto* imp = std::get_if<Binary>(&g->body->node);
  ASSERT_TRUE(imp);
  EXPECT_EQ(imp->op, BinaryOp::Implies);
}

TEST(Parser, UnannotatedBinderTakesTheBlockTarget) {
  const auto p = testing::load_fixture("pubsub.pmodel");
  const auto& act = *p.arch_spec->formulas[0].formula;
  const auto& body = *std::get<Globally>(act.node).body;
  const auto& rhs = *std::get<Binary>(body.node).rhs;
  const auto& q = std::get<Quantified>(rhs.node);
  EXPECT_EQ(q.quantifier, Quantifier::Forall);
  EXPECT_EQ(q.binder.name.text, "q");
  EXPECT_FALSE(q.binder.annotated);
  ASSERT_TRUE(q.binder.target);
  EXPECT_EQ(q.binder.target->spelling(), "Publisher");
}

TEST(Parser, Precedence) {
  auto f = formula("cAct(a) ^ cAct(b) | cAct(c)");
  EXPECT_EQ(std::get<Binary>(f->node).op, BinaryOp::Or);

  f = formula("cAct(a) => cAct(b) => cAct(c)");
  const auto& outer = std::get<Binary>(f->node);
  EXPECT_EQ(outer.op, BinaryOp::Implies);
  EXPECT_TRUE(std::holds_alternative<CActAtom>(outer.lhs->node));
  EXPECT_EQ(std::get<Binary>(outer.rhs->node).op, BinaryOp::Implies);

  f = formula("cAct(a) => cAct(b) W cAct(c)");
  const auto& w = std::get<Binary>(f->node);
  EXPECT_EQ(w.op, BinaryOp::WeakUntil);
  EXPECT_EQ(std::get<Binary>(w.lhs->node).op, BinaryOp::Implies);

  f = formula("!cAct(a) ^ cAct(b)");
  EXPECT_EQ(std::get<Binary>(f->node).op, BinaryOp::And);
}

TEST(Parser, UnicodeAndAsciiSpellingsAgree) {
  FormulaScope scope;
  scope.component_types = {"Car"};
  const auto a = formula("∀x: Car. ¬cAct(x) ∨ ∃y: Car. eq(x, y) ∧ (cAct(y) ⇒ cAct(x))", scope);
  const auto b = formula("forall x: Car. !cAct(x) | exists y: Car. eq(x, y) ^ (cAct(y) -> cAct(x))", scope);
  EXPECT_TRUE(structurally_equal(*a, *b));
}

TEST(Parser, VBinder) {
  FormulaScope scope;
  scope.variables.push_back(build::flex("q", build::component("Publisher")));
  const auto f = formula("Vq. cAct(q)", scope);
  const auto& q = std::get<Quantified>(f->node);
  EXPECT_EQ(q.binder.name.text, "q");
  ASSERT_TRUE(q.binder.target);
  EXPECT_TRUE(q.binder.target->is_component());

  // A port read on a variable whose name starts with V is not a binder.
  const auto g = formula("val(Vx.p, e)");
  EXPECT_TRUE(std::holds_alternative<ValAtom>(g->node));
}

TEST(Parser, Terms) {
  const auto f = formula("val(p.psb, Subscription.sub(s.id, e))");
  const auto& v = std::get<ValAtom>(f->node);
  EXPECT_EQ(v.port.var.name.text, "p");
  EXPECT_EQ(v.port.port.text, "psb");
  const auto& app = std::get<FunctionApp>(v.value.node);
  EXPECT_EQ(app.function.spelling(), "Subscription.sub");
  ASSERT_EQ(app.args.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<IdRead>(app.args[0].node));
  EXPECT_TRUE(std::holds_alternative<DataVar>(app.args[1].node));

  const auto eq = formula("Event.evt(p.pnt) = e");
  EXPECT_TRUE(std::holds_alternative<TermEqAtom>(eq->node));
  const auto pred = formula("Event.in(s, e)");
  EXPECT_TRUE(std::holds_alternative<PredicateAtom>(pred->node));
}

TEST(Parser, SyntaxErrorHasPosition) {
  const auto r = parse_pattern("Pattern P ShortName p {\n  CTypes {\n    CType A ShortName a { InputPorts { ) }\n  }\n}\n",
                               "x.pmodel");
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, "P001");
  EXPECT_EQ(r.diagnostics[0].file, "x.pmodel");
  EXPECT_EQ(r.diagnostics[0].span.line, 3u);
}

TEST(Parser, LexicalError) {
  const auto r = parse_pattern("Pattern P ShortName p { $ }");
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, "P002");
}

TEST(Parser, RecoversAtSectionKeywords) {
  const auto r = parse_pattern(
      "Pattern P ShortName p {\n"
      "  DTSpec { DT D ( Sort ) }\n"
      "  ArchSpec { rig x : D.A\n  f: G( }\n"
      "}\n");
  EXPECT_FALSE(r.ok());
  std::set<std::size_t> lines;
  for (const auto& d : r.diagnostics) {
    lines.insert(d.span.line);
  }
  EXPECT_GE(lines.size(), 2u);
}

TEST(Parser, Comments) {
  const auto r = parse_pattern("// a\nPattern P ShortName p { // b { c\n }// d\n");
  ASSERT_TRUE(r.ok()) << render(r.diagnostics);
  EXPECT_TRUE(r.pattern->data_types.empty());
}

TEST(Parser, EmptyInput) {
  const auto r = parse_pattern("");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_errors(r.diagnostics));
}

TEST(Parser, DeepNestingIsAnErrorNotACrash) {
  std::string text = "Pattern P ShortName p { ArchSpec { f: ";
  text += std::string(100000, '(');
  text += " }}";
  const auto r = parse_pattern(text);
  EXPECT_FALSE(r.ok());
}

}  // namespace
}  // namespace factum
