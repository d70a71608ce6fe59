#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "factum/enumerate.hpp"
#include "factum/eval.hpp"
#include "factum/isabelle.hpp"
#include "factum/parser.hpp"
#include "factum/printer.hpp"
#include "factum/trace.hpp"
#include "factum/validator.hpp"

namespace factum::cli {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Parsed and validated pattern; diagnostics go to `err`. Nullopt if there
// are errors.
std::optional<Pattern> load_pattern(const std::string& path, std::ostream& err) {
  auto parsed = parse_pattern(read_file(path), path);
  if (!parsed.ok()) {
    sort_diagnostics(parsed.diagnostics);
    err << render(parsed.diagnostics);
    return std::nullopt;
  }
  auto report = validate(*parsed.pattern);
  auto diagnostics = parsed.diagnostics;
  diagnostics.insert(diagnostics.end(), report.diagnostics.begin(), report.diagnostics.end());
  sort_diagnostics(diagnostics);
  err << render(diagnostics);
  if (!report.ok || has_errors(diagnostics)) {
    return std::nullopt;
  }
  return std::move(*parsed.pattern);
}

int check(const std::string& path, std::ostream& err) { return load_pattern(path, err) ? kOk : kFailed; }

int diagram(const std::string& path, std::ostream& out, std::ostream& err) {
  auto pattern = load_pattern(path, err);
  if (!pattern) {
    return kFailed;
  }
  out << render_dot(*pattern);
  return kOk;
}

int generate(const std::string& path, const std::string& dir, const TheoryOptions& options, std::ostream& out,
             std::ostream& err) {
  auto pattern = load_pattern(path, err);
  if (!pattern) {
    return kFailed;
  }
  const auto text = generate_theory(*pattern, options);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto target = fs::path(dir) / (pattern->name.text + ".thy");
  std::ofstream file(target, std::ios::binary);
  if (!file || !(file << text)) {
    throw IoError("cannot write '" + target.string() + "'");
  }
  out << target.string() << "\n";
  return kOk;
}

// Regenerates whenever the model file's modification time changes. Never
// returns unless the file disappears.
int watch(const std::string& path, const std::string& dir, const TheoryOptions& options, std::ostream& out,
          std::ostream& err) {
  std::optional<fs::file_time_type> seen;
  while (true) {
    std::error_code ec;
    const auto stamp = fs::last_write_time(path, ec);
    if (ec) {
      err << "error: '" << path << "' is no longer readable\n";
      return kUsage;
    }
    if (stamp != seen) {
      seen = stamp;
      try {
        generate(path, dir, options, out, err);
      } catch (const GenerationError& e) {
        err << "error: " << e.what() << "\n";
      }
      out.flush();
      err.flush();
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
  }
}

int eval_trace(const std::string& path, const std::string& trace_path, const std::vector<std::string>& labels,
               std::ostream& out, std::ostream& err) {
  auto pattern = load_pattern(path, err);
  if (!pattern) {
    return kFailed;
  }
  const auto trace = load_trace(read_file(trace_path), *pattern);
  const auto verdicts = check_spec(*pattern, trace);
  std::vector<const Verdict*> queried;
  if (labels.empty()) {
    for (const auto& v : verdicts) {
      queried.push_back(&v);
    }
  } else {
    for (const auto& label : labels) {
      auto it = std::find_if(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.label == label; });
      if (it == verdicts.end()) {
        err << "error: no formula labelled '" << label << "'\n";
        return kUsage;
      }
      queried.push_back(&*it);
    }
  }
  bool all = true;
  for (const auto* v : queried) {
    out << v->label << ": " << (v->holds ? "holds" : "fails") << "\n";
    all = all && v->holds;
  }
  return all ? kOk : kFailed;
}

int entail(const std::string& path, const Bounds& bounds, const std::string& model_path, std::ostream& out,
           std::ostream& err) {
  auto pattern = load_pattern(path, err);
  if (!pattern) {
    return kFailed;
  }
  std::optional<DataModel> model;
  if (!model_path.empty()) {
    model = load_model(read_file(model_path), *pattern);
  }
  const auto result = check_entailment(*pattern, bounds, model);
  if (result.holds) {
    out << "ENTAILED\n";
    return kOk;
  }
  err << "violated: " << result.violated << "\n";
  out << to_json(*result.counterexample, *pattern);
  return kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks architectural design patterns and generates Isabelle theories.", "factum"};
  app.require_subcommand(1);

  std::string input;
  auto* check_cmd = app.add_subcommand("check", "Parse and validate a pattern");
  check_cmd->add_option("pattern", input, "Pattern file (.pmodel)")->required();

  auto* diagram_cmd = app.add_subcommand("diagram", "Print the component diagram as Graphviz DOT");
  diagram_cmd->add_option("pattern", input, "Pattern file (.pmodel)")->required();

  std::string out_dir = ".";
  std::string import_theory;
  bool unicode = false;
  bool watch_flag = false;
  auto* gen_cmd = app.add_subcommand("gen-isabelle", "Write <PatternName>.thy");
  gen_cmd->add_option("pattern", input, "Pattern file (.pmodel)")->required();
  gen_cmd->add_option("-o,--output", out_dir, "Output directory");
  gen_cmd->add_option("--import", import_theory, "Theory imported by the generated file");
  gen_cmd->add_flag("--unicode", unicode, "Emit Unicode symbols instead of ASCII escapes");
  gen_cmd->add_flag("--watch", watch_flag, "Regenerate whenever the pattern file changes");

  std::string trace_path;
  std::vector<std::string> labels;
  auto* eval_cmd = app.add_subcommand("eval-trace", "Evaluate the pattern's formulas on a trace");
  eval_cmd->add_option("pattern", input, "Pattern file (.pmodel)")->required();
  eval_cmd->add_option("--trace", trace_path, "Trace file (JSON)")->required();
  eval_cmd->add_option("--formula", labels, "Only report these labels");

  Bounds bounds;
  std::size_t max_instances = 1;
  std::vector<std::string> per_type;
  std::string model_path;
  auto* entail_cmd = app.add_subcommand("entail", "Bounded check that the constraints entail the guarantees");
  entail_cmd->add_option("pattern", input, "Pattern file (.pmodel)")->required();
  entail_cmd->add_option("--max-instances", max_instances, "Instances per component type")->capture_default_str();
  entail_cmd->add_option("--instances", per_type, "Per-type bound, as Type=k");
  entail_cmd->add_option("--max-length", bounds.max_length, "Longest trace")->capture_default_str();
  entail_cmd->add_option("--max-values", bounds.max_values_per_port, "Largest valuation per free port")
      ->capture_default_str();
  entail_cmd->add_option("--carrier-size", bounds.carrier_size, "Atoms per sort in the default model")
      ->capture_default_str();
  entail_cmd->add_option("--ceiling", bounds.ceiling, "Give up above this many configurations or traces")
      ->capture_default_str();
  entail_cmd->add_option("--model", model_path, "Data model (JSON)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check_cmd->parsed()) {
      return check(input, err);
    }
    if (diagram_cmd->parsed()) {
      return diagram(input, out, err);
    }
    if (gen_cmd->parsed()) {
      TheoryOptions options;
      options.import_theory = import_theory.empty() ? import_from_environment() : import_theory;
      options.unicode = unicode;
      return watch_flag ? watch(input, out_dir, options, out, err) : generate(input, out_dir, options, out, err);
    }
    if (eval_cmd->parsed()) {
      return eval_trace(input, trace_path, labels, out, err);
    }
    if (entail_cmd->parsed()) {
      bounds.default_max_instances = max_instances;
      for (const auto& spec : per_type) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
          err << "error: --instances expects Type=k, got '" << spec << "'\n";
          return kUsage;
        }
        try {
          bounds.max_instances[spec.substr(0, eq)] = std::stoul(spec.substr(eq + 1));
        } catch (const std::exception&) {
          err << "error: --instances expects Type=k, got '" << spec << "'\n";
          return kUsage;
        }
      }
      return entail(input, bounds, model_path, out, err);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TraceError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BoundExceeded& e) {
    err << "error: bound exceeded: " << e.what() << "\n";
    return kBoundExceeded;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace factum::cli
