#include <gtest/gtest.h>

#include "factum/parser.hpp"
#include "factum/printer.hpp"
#include "support.hpp"

namespace factum {
namespace {

std::string reprint(std::string_view text) {
  auto r = parse_formula(text);
  EXPECT_TRUE(r.formula) << render(r.diagnostics);
  return r.formula ? print_formula(*r.formula) : "";
}

TEST(Printer, Formulas) {
  EXPECT_EQ(reprint("cAct(a)∧cAct(b)"), "cAct(a) ^ cAct(b)");
  EXPECT_EQ(reprint("(cAct(a) ∨ cAct(b)) ∧ cAct(c)"), "(cAct(a) | cAct(b)) ^ cAct(c)");
  EXPECT_EQ(reprint("cAct(a) ∧ (cAct(b) ∧ cAct(c))"), "cAct(a) ^ (cAct(b) ^ cAct(c))");
  EXPECT_EQ(reprint("(cAct(a) ⇒ cAct(b)) ⇒ cAct(c)"), "(cAct(a) => cAct(b)) => cAct(c)");
  EXPECT_EQ(reprint("cAct(a) ⇒ (cAct(b) ⇒ cAct(c))"), "cAct(a) => cAct(b) => cAct(c)");
  EXPECT_EQ(reprint("(G cAct(a)) ∧ cAct(b)"), "(G(cAct(a))) ^ cAct(b)");
  EXPECT_EQ(reprint("G cAct(a) ∧ cAct(b)"), "G(cAct(a) ^ cAct(b))");
  EXPECT_EQ(reprint("¬(cAct(a) W cAct(b))"), "!(cAct(a) W cAct(b))");
  EXPECT_EQ(reprint("∃x: Car. val(x.ci, e)"), "exists x: Car. val(x.ci, e)");
  EXPECT_EQ(reprint("val(p.psb, Subscription.sub(s.id, e))"), "val(p.psb, Subscription.sub(s.id, e))");
  EXPECT_EQ(reprint("Event.evt(p.pnt) = e"), "Event.evt(p.pnt) = e");
}

TEST(Printer, FixturesRoundTrip) {
  for (const char* name : {"ecar.pmodel", "pubsub.pmodel", "broken_sort.pmodel", "arity.pmodel", "wrong_port.pmodel"}) {
    const auto p = testing::load_fixture(name);
    const auto text = pretty_print(p);
    const auto again = parse_pattern(text);
    ASSERT_TRUE(again.ok()) << name << "\n" << text << render(again.diagnostics);
    EXPECT_TRUE(structurally_equal(p, *again.pattern)) << name;
    EXPECT_EQ(pretty_print(*again.pattern), text) << name;
  }
}

TEST(Printer, EmptyPattern) {
  Pattern p;
  p.name = build::name("Empty");
  p.short_name = build::name("e");
  EXPECT_EQ(pretty_print(p), "Pattern Empty ShortName e { }\n");
  const auto r = parse_pattern(pretty_print(p));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(structurally_equal(p, *r.pattern));
}

TEST(Printer, Dot) {
  const auto dot = render_dot(testing::load_fixture("ecar.pmodel"));
  EXPECT_EQ(dot.rfind("digraph \"HeallingConn\" {", 0), 0u);
  EXPECT_NE(dot.find("subgraph \"cluster_Switch\""), std::string::npos);
  EXPECT_NE(dot.find("\"Power.po\" -> \"Switch.si\";"), std::string::npos);
  EXPECT_NE(dot.find("\"Switch.so\" -> \"Car.ci\";"), std::string::npos);
  EXPECT_NE(dot.find("\"Switch.so\" [label=\"so\", shape=circle, style=filled]"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

}  // namespace
}  // namespace factum
