#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

namespace factum {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return testing::fixture_path(name); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = ::testing::TempDir() + "/" + name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

TEST(Cli, CheckValid) {
  const auto r = run({"check", fixture("ecar.pmodel")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST(Cli, CheckBrokenSort) {
  const auto r = run({"check", fixture("broken_sort.pmodel")});
  EXPECT_EQ(r.code, 1);
  std::istringstream lines(r.err);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) {
    all.push_back(line);
  }
  ASSERT_EQ(all.size(), 6u);
  EXPECT_NE(all[0].find("error[E001]: Couldn't resolve reference to Sort 'ABC'."), std::string::npos);
  for (std::size_t i = 1; i < 6; ++i) {
    EXPECT_EQ(all[i].rfind("    fix: ", 0), 0u);
  }
}

TEST(Cli, CheckSyntaxError) {
  const auto r = run({"check", temp_file("bad.pmodel", "Pattern {")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error[P001]"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", "/nonexistent/x.pmodel"}).code, 2);
  EXPECT_EQ(run({"eval-trace", fixture("ecar.pmodel")}).code, 2);
  EXPECT_EQ(run({"entail", fixture("ecar.pmodel"), "--instances", "Switch"}).code, 2);
  EXPECT_EQ(run({"entail", fixture("ecar.pmodel"), "--max-length", "x"}).code, 2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("gen-isabelle"), std::string::npos);
}

TEST(Cli, Diagram) {
  const auto r = run({"diagram", fixture("ecar.pmodel")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph \"HeallingConn\"", 0), 0u);
}

TEST(Cli, GenIsabelle) {
  const auto dir = ::testing::TempDir() + "/factum_thy";
  std::filesystem::remove_all(dir);
  const auto r = run({"gen-isabelle", fixture("pubsub.pmodel"), "-o", dir});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(testing::read_file(dir + "/PublisherSubscriber.thy"),
            testing::read_file(testing::golden_path("PublisherSubscriber.thy")));

  ::setenv("FACTUM_ISABELLE_IMPORT", "EnvImport", 1);
  run({"gen-isabelle", fixture("pubsub.pmodel"), "-o", dir});
  EXPECT_NE(testing::read_file(dir + "/PublisherSubscriber.thy").find("imports EnvImport\n"), std::string::npos);
  run({"gen-isabelle", fixture("pubsub.pmodel"), "-o", dir, "--import", "FlagImport"});
  EXPECT_NE(testing::read_file(dir + "/PublisherSubscriber.thy").find("imports FlagImport\n"), std::string::npos);
  ::unsetenv("FACTUM_ISABELLE_IMPORT");

  run({"gen-isabelle", fixture("pubsub.pmodel"), "-o", dir, "--unicode"});
  EXPECT_NE(testing::read_file(dir + "/PublisherSubscriber.thy").find("∈"), std::string::npos);

  EXPECT_EQ(run({"gen-isabelle", fixture("broken_sort.pmodel"), "-o", dir}).code, 1);
}

TEST(Cli, EvalTrace) {
  auto r = run({"eval-trace", fixture("ecar.pmodel"), "--trace", fixture("ecar_trace.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "swBhvTa: holds\nhealing: holds\ndelivery: holds\n");

  r = run({"eval-trace", fixture("ecar.pmodel"), "--trace", fixture("ecar_trace_switch_down.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "swBhvTa: holds\nhealing: fails\ndelivery: holds\n");

  r = run({"eval-trace", fixture("ecar.pmodel"), "--trace", fixture("ecar_trace_switch_down.json"), "--formula",
           "delivery"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "delivery: holds\n");

  EXPECT_EQ(run({"eval-trace", fixture("ecar.pmodel"), "--trace", fixture("ecar_trace.json"), "--formula", "nope"}).code,
            2);
  EXPECT_EQ(run({"eval-trace", fixture("ecar.pmodel"), "--trace", temp_file("t.json", "{}")}).code, 2);
}

TEST(Cli, Entail) {
  auto r = run({"entail", fixture("ecar.pmodel"), "--max-instances", "1", "--instances", "Switch=2", "--max-length", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ENTAILED\n");

  r = run({"entail", fixture("ecar.pmodel"), "--max-instances", "2", "--max-length", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ENTAILED\n");

  r = run({"entail", fixture("ecar.pmodel"), "--max-instances", "3", "--max-length", "3", "--ceiling", "1000"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, EntailCounterexample) {
  auto text = testing::read_file(fixture("ecar.pmodel"));
  const auto at = text.find("    healing:");
  text.erase(at, text.find('\n', at) - at);
  const auto model = temp_file("no_healing.pmodel", text);
  const auto r = run({"entail", model, "--instances", "Switch=2", "--max-length", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err, "violated: delivery\n");
  const auto trace = temp_file("cex.json", r.out);
  const auto e = run({"eval-trace", fixture("ecar.pmodel"), "--trace", trace, "--formula", "swBhvTa", "--formula",
                      "delivery"});
  EXPECT_EQ(e.out, "swBhvTa: holds\ndelivery: fails\n");
  EXPECT_EQ(e.code, 1);
}

TEST(Cli, EntailWithModel) {
  const auto model = temp_file("model.json", R"({"carriers": {"Energy.energy": ["a", "b"]}})");
  const auto r = run({"entail", fixture("ecar.pmodel"), "--model", model, "--max-values", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"entail", fixture("ecar.pmodel"), "--model", temp_file("m.json", "{}")}).code, 2);
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = run({"entail", fixture("pubsub.pmodel"), "--max-length", "2"});
  const auto b = run({"entail", fixture("pubsub.pmodel"), "--max-length", "2"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
  EXPECT_EQ(a.code, b.code);
}

}  // namespace
}  // namespace factum
