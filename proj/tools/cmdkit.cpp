#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cmdkit/change_analysis.hpp"
#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/coverage.hpp"
#include "cmdkit/dsl.hpp"
#include "cmdkit/model.hpp"
#include "cmdkit/regression_select.hpp"
#include "cmdkit/report.hpp"
#include "cmdkit/test_strategy.hpp"
#include "cmdkit/trace.hpp"

namespace {

using namespace cmdkit;

// Bad input (unreadable file, parse error, invalid model) -> exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ProgramModel load_model(const std::string& path, bool check = true) {
  ProgramModel model = parse_model(read_file(path), path);
  model.model_id = std::filesystem::path(path).stem().string();
  model = synthesize_default_constructors(model);
  if (check) {
    ValidationReport report = validate(model);
    if (!report.empty()) {
      std::ostringstream msg;
      msg << "'" << path << "' is not a valid model:";
      for (const auto& v : report) msg << "\n  " << v.code << " " << v.message;
      throw InputError(msg.str());
    }
  }
  return model;
}

int cmd_build(const std::string& path, const std::string& dot_out) {
  ProgramModel model = load_model(path);
  ClassMessageDiagram cmd = build_cmd(model);
  std::size_t methods = 0, data = 0;
  for (const auto& n : cmd.nodes)
    (n.kind == NodeKind::Method ? methods : data)++;
  std::cout << "model " << model.model_id << ": " << methods
            << " method nodes, " << data << " data nodes, " << cmd.edges.size()
            << " edges\n";
  if (!dot_out.empty()) {
    std::ofstream out(dot_out, std::ios::binary);
    if (!out) throw InputError("cannot write '" + dot_out + "'");
    out << export_dot(cmd);
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  ProgramModel model = parse_model(read_file(path), path);
  model.model_id = std::filesystem::path(path).stem().string();
  model = synthesize_default_constructors(model);
  ValidationReport report = validate(model);
  for (const auto& v : report)
    std::cout << v.code << " " << v.message << "\n";
  return report.empty() ? 0 : 1;
}

int cmd_diff(const std::string& old_path, const std::string& new_path) {
  ChangeSet changes = diff_models(load_model(old_path), load_model(new_path));
  std::cout << format_change_set(changes);
  return 0;
}

int cmd_impact(const std::string& old_path, const std::string& new_path,
               bool class_level) {
  ProgramModel old_model = load_model(old_path);
  ProgramModel new_model = load_model(new_path);
  ChangeSet changes = diff_models(old_model, new_model);
  ClassMessageDiagram cmd = build_cmd(new_model);
  if (class_level) {
    for (const auto& cls : class_level_impact(new_model, cmd, changes))
      std::cout << cls << "\n";
  } else {
    ImpactSet set = impact(cmd, changes);
    for (const auto& m : set.methods) std::cout << m.label() << "\n";
    for (const auto& v : set.variables) std::cout << "var " << v.label() << "\n";
  }
  return 0;
}

int cmd_order(const std::string& path, const std::string& impacted_from,
              bool top_down) {
  ProgramModel model = load_model(path);
  ClassMessageDiagram cmd = build_cmd(model);
  if (impacted_from.empty()) {
    std::cout << format_strategy(generate_strategy(cmd, nullptr, top_down));
  } else {
    ProgramModel old_model = load_model(impacted_from);
    ChangeSet changes = diff_models(old_model, model);
    ImpactSet set = impact(cmd, changes);
    std::cout << format_strategy(generate_strategy(cmd, &set, top_down));
  }
  return 0;
}

int cmd_coverage(const std::string& model_path, const std::string& trace_path,
                 const std::string& criterion, std::size_t cycle_cap,
                 double require) {
  ProgramModel model = load_model(model_path);
  ClassMessageDiagram cmd = build_cmd(model);
  TraceStore traces = parse_traces(read_file(trace_path), model);

  CoverageReport report;
  if (criterion == "method") {
    report = method_coverage(cmd, map_traces(cmd, traces));
  } else if (criterion == "message") {
    report = message_coverage(cmd, map_traces(cmd, traces));
  } else if (criterion == "poly-message") {
    report = poly_message_coverage(cmd, map_traces(cmd, traces));
  } else if (criterion == "boundary-interior") {
    report = boundary_interior(cmd, traces, cycle_cap);
  } else if (criterion == "complete-path") {
    report = complete_path_coverage(cmd, traces);
  } else {
    throw CLI::ValidationError("--criterion",
                               "unknown criterion '" + criterion + "'");
  }
  std::cout << format_report(report);
  return report.ratio() + 1e-12 < require ? 1 : 0;
}

int cmd_select(const std::string& old_path, const std::string& new_path,
               const std::string& trace_path, const std::string& specs) {
  ProgramModel old_model = load_model(old_path);
  ProgramModel new_model = load_model(new_path);
  ChangeSet changes = diff_models(old_model, new_model);
  ImpactSet set = impact(build_cmd(new_model), changes);
  TraceStore traces = parse_traces(read_file(trace_path), old_model);

  std::set<std::string> changed_specs;
  std::stringstream ss(specs);
  std::string tag;
  while (std::getline(ss, tag, ','))
    if (!tag.empty()) changed_specs.insert(tag);

  SelectionResult result =
      select_tests(traces, set, changed_specs, old_model.model_id);
  for (const auto& id : result.rerun) std::cout << "rerun " << id << "\n";
  for (const auto& id : result.obsolete) std::cout << "obsolete " << id << "\n";
  for (const auto& id : result.retained) std::cout << "retained " << id << "\n";
  return 0;
}

int cmd_stats(const std::string& path, const std::string& format) {
  ProgramModel model = load_model(path);
  std::cout << format_stats(stats(model, build_cmd(model)), format == "tsv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-message-diagram change impact and test planning toolkit"};
  app.require_subcommand(1);

  std::size_t cycle_cap = 10000;
  if (const char* env = std::getenv("CMDKIT_CYCLE_CAP"))
    cycle_cap = static_cast<std::size_t>(std::stoull(env));

  std::string model_path, old_path, new_path, trace_path;
  std::string dot_out, impacted_from, criterion, specs, format = "text";
  bool class_level = false, top_down = false;
  double require = 0.0;

  auto* build = app.add_subcommand("build", "Build the diagram from a model");
  build->add_option("model", model_path)->required();
  build->add_option("--dot", dot_out, "Write Graphviz DOT output");

  auto* validate_cmd = app.add_subcommand("validate", "Check model invariants");
  validate_cmd->add_option("model", model_path)->required();

  auto* diff = app.add_subcommand("diff", "Classify changes between versions");
  diff->add_option("old", old_path)->required();
  diff->add_option("new", new_path)->required();

  auto* impact_cmd = app.add_subcommand("impact", "Compute the change impact set");
  impact_cmd->add_option("old", old_path)->required();
  impact_cmd->add_option("new", new_path)->required();
  impact_cmd->add_flag("--class-level", class_level,
                       "Coarse class-reachability baseline");

  auto* order = app.add_subcommand("order", "Generate the integration test order");
  order->add_option("model", model_path)->required();
  order->add_option("--impacted-from", impacted_from,
                    "Restrict to methods impacted since this model version");
  order->add_flag("--top-down", top_down, "Emit levels top-down");

  auto* coverage = app.add_subcommand("coverage", "Evaluate a coverage criterion");
  coverage->add_option("model", model_path)->required();
  coverage->add_option("traces", trace_path)->required();
  coverage
      ->add_option("--criterion", criterion,
                   "method|message|poly-message|boundary-interior|complete-path")
      ->required();
  coverage->add_option("--cycle-cap", cycle_cap, "Simple-cycle enumeration cap");
  coverage->add_option("--require", require, "Exit 1 below this ratio");

  auto* select = app.add_subcommand("select", "Select and prioritize regression tests");
  select->add_option("old", old_path)->required();
  select->add_option("new", new_path)->required();
  select->add_option("traces", trace_path)->required();
  select->add_option("--changed-specs", specs,
                     "Comma-separated changed specification tags");

  auto* stats_cmd = app.add_subcommand("stats", "Graph metrics report");
  stats_cmd->add_option("model", model_path)->required();
  stats_cmd->add_option("--format", format, "text|tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build) return cmd_build(model_path, dot_out);
    if (*validate_cmd) return cmd_validate(model_path);
    if (*diff) return cmd_diff(old_path, new_path);
    if (*impact_cmd) return cmd_impact(old_path, new_path, class_level);
    if (*order) return cmd_order(model_path, impacted_from, top_down);
    if (*coverage)
      return cmd_coverage(model_path, trace_path, criterion, cycle_cap, require);
    if (*select) return cmd_select(old_path, new_path, trace_path, specs);
    if (*stats_cmd) return cmd_stats(model_path, format);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TraceFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
