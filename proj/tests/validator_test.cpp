#include <gtest/gtest.h>

#include "factum/parser.hpp"
#include "factum/validator.hpp"
#include "support.hpp"

namespace factum {
namespace {

std::vector<std::string> codes_of(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) {
    out.push_back(d.code);
  }
  return out;
}

// Small pattern with a slot for the data types, the ports and one formula.
std::string pattern_text(std::string_view formula, std::string_view sorts = "Sort A, B",
                         std::string_view connects = "Y.i") {
  return "Pattern V ShortName v {\n"
         "  DTSpec { DT D ( " + std::string(sorts) + "\n Operation f: A => B ) }\n"
         "  CTypes {\n"
         "    CType X ShortName x { OutputPorts { OutputPort o(Type: A connects " + std::string(connects) + ") } },\n"
         "    CType Y ShortName y { Id(Type: B) InputPorts { InputPort i(Type: A), InputPort j(Type: B), InputPort k(Type: A) } },\n"
         "    CType Z ShortName z { }\n"
         "  }\n"
         "  ArchSpec {\n"
         "    rig a : X,\n"
         "    rig b : Y,\n"
         "    rig d : D.A,\n"
         "    rig z : Z\n"
         "    f: " + std::string(formula) + "\n"
         "  }\n"
         "}\n";
}

ValidationReport check(const std::string& text) {
  auto r = parse_pattern(text, "v.pmodel");
  EXPECT_TRUE(r.ok()) << render(r.diagnostics) << text;
  if (!r.ok()) {
    return {};
  }
  return validate(*r.pattern);
}

TEST(Validator, FixturesValidate) {
  for (const char* name : {"ecar.pmodel", "pubsub.pmodel"}) {
    const auto report = validate(testing::load_fixture(name));
    EXPECT_TRUE(report.ok) << name;
    EXPECT_TRUE(report.diagnostics.empty()) << render(report.diagnostics);
  }
}

TEST(Validator, UnresolvedSort) {
  const auto report = validate(testing::load_fixture("broken_sort.pmodel"));
  EXPECT_FALSE(report.ok);
  ASSERT_EQ(report.diagnostics.size(), 1u);
  const auto& d = report.diagnostics[0];
  EXPECT_EQ(d.code, "E001");
  EXPECT_EQ(d.message, "Couldn't resolve reference to Sort 'ABC'.");
  EXPECT_EQ(d.suggestions, (std::vector<std::string>{"Event.ESET", "Event.EVT", "Event.MSG", "SBS", "SID"}));
  EXPECT_EQ(d.span.line, 10u);
}

TEST(Validator, Arity) {
  const auto report = validate(testing::load_fixture("arity.pmodel"));
  EXPECT_EQ(codes_of(report.diagnostics), std::vector<std::string>{"E002"});
  EXPECT_NE(report.diagnostics[0].message.find("Subscription.sub"), std::string::npos);
}

TEST(Validator, WrongPort) {
  const auto report = validate(testing::load_fixture("wrong_port.pmodel"));
  ASSERT_EQ(codes_of(report.diagnostics), std::vector<std::string>{"E004"});
  EXPECT_EQ(report.diagnostics[0].suggestions, (std::vector<std::string>{"pnt", "psb"}));
}

TEST(Validator, CleanFormula) {
  const auto report = check(pattern_text("G(conn(a.o, b.i) ^ val(a.o, d) ^ D.f(d) = b.id)"));
  EXPECT_TRUE(report.ok);
  EXPECT_TRUE(report.diagnostics.empty()) << render(report.diagnostics);
}

struct Case {
  const char* formula;
  const char* code;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.code; }

class FormulaDiagnostics : public ::testing::TestWithParam<Case> {};

TEST_P(FormulaDiagnostics, Code) {
  const auto report = check(pattern_text(GetParam().formula));
  ASSERT_FALSE(report.diagnostics.empty()) << GetParam().formula;
  EXPECT_EQ(report.diagnostics[0].code, GetParam().code) << render(report.diagnostics);
}

INSTANTIATE_TEST_SUITE_P(Validator, FormulaDiagnostics,
                         ::testing::Values(Case{"D.f(d, d) = b.id", "E002"},
                                           Case{"eq(a, b)", "E003"},
                                           Case{"val(a.o, b.id)", "E003"},
                                           Case{"cAct(d)", "E003"},
                                           Case{"D.f(a) = b.id", "E003"},
                                           Case{"val(a.q, d)", "E004"},
                                           Case{"cAct(w)", "E005"},
                                           Case{"D.g(d) = d", "E005"},
                                           Case{"z.id = d", "E005"},
                                           Case{"conn(b.i, a.o)", "E008"},
                                           Case{"conn(a.o, b.k)", "W001"}),
                         [](const ::testing::TestParamInfo<Case>& info) {
                           return std::string(info.param.code) + "_" + std::to_string(info.index);
                         });

TEST(Validator, WarningDoesNotFail) {
  const auto report = check(pattern_text("conn(a.o, b.k)"));
  EXPECT_TRUE(report.ok);
  ASSERT_EQ(report.diagnostics.size(), 1u);
  EXPECT_EQ(report.diagnostics[0].severity, Severity::Warning);
}

TEST(Validator, Declarations) {
  EXPECT_EQ(codes_of(check(pattern_text("cAct(a)", "Sort A, B, A")).diagnostics), std::vector<std::string>{"E006"});
  EXPECT_EQ(codes_of(check(pattern_text("cAct(a)", "Sort A, B", "Y.q")).diagnostics), std::vector<std::string>{"E007"});
  EXPECT_EQ(codes_of(check(pattern_text("cAct(a)", "Sort A, B", "Y.j")).diagnostics), std::vector<std::string>{"E007"});
}

TEST(Validator, DiagnosticsAreSortedAndRendered) {
  const auto report = validate(testing::load_fixture("broken_sort.pmodel"));
  const auto text = render(report.diagnostics);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            testing::fixture_path("broken_sort.pmodel") + ":10:40: error[E001]: Couldn't resolve reference to Sort 'ABC'.");
  EXPECT_NE(text.find("\n    fix: Event.ESET\n"), std::string::npos);
}

TEST(Validator, InferSort) {
  const auto p = testing::load_fixture("pubsub.pmodel");
  const auto table = build_symbol_table(p);
  VariableScope scope(*p.arch_spec);
  const auto sort = infer_sort(build::app("Subscription.sub", {build::id("s"), build::var("e")}), scope, table);
  ASSERT_TRUE(sort);
  EXPECT_EQ(sort->qualified(), "Subscription.SBS");
  EXPECT_EQ(infer_sort(build::port_term("p", "pnt"), scope, table)->qualified(), "Event.MSG");
  EXPECT_FALSE(infer_sort(build::var("nope"), scope, table));
}

}  // namespace
}  // namespace factum
