#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "preludec/elaborator.hpp"
#include "preludec/emitter.hpp"
#include "preludec/parser.hpp"
#include "preludec/sim.hpp"

using namespace preludec;

namespace {

constexpr int kExitErrors = 1;
constexpr int kExitUsage = 2;

bool use_color() {
  if (const char* env = std::getenv("PRELUDEC_COLOR")) {
    std::string v = env;
    if (v == "always") return true;
    if (v == "never") return false;
  }
  return isatty(fileno(stderr)) != 0;
}

bool read_source(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int report(std::vector<Diagnostic> diags, bool json) {
  sort_diagnostics(diags);
  if (json) {
    std::cout << render_diagnostics(diags, DiagnosticFormat::Json, false);
  } else if (!diags.empty()) {
    std::cerr << render_diagnostics(diags, DiagnosticFormat::Human, use_color());
  }
  return has_errors(diags) ? kExitErrors : 0;
}

struct FrontendResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
  bool parsed = false;
  CheckResult checked;
};

// Parse errors suppress the semantic pass: equations past a bad token are
// missing and would only produce noise diagnostics.
FrontendResult run_frontend(const std::string& path, const CheckOptions& options) {
  FrontendResult out;
  std::string source;
  if (!read_source(path, source)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return out;
  }
  out.parsed = true;
  ParseResult pr = parse_program(source, path);
  out.program = std::move(pr.program);
  out.diagnostics = std::move(pr.diagnostics);
  if (has_errors(out.diagnostics)) return out;
  out.checked = check_program(out.program, options);
  out.diagnostics.insert(out.diagnostics.end(), out.checked.diagnostics.begin(),
                         out.checked.diagnostics.end());
  return out;
}

TaggedStream restamp_onto(const TaggedStream& in, const Clock& c) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < in.size(); ++i) {
    entries.push_back(Entry{in.entries()[i].value, c.date_at(BigInt(i))});
  }
  return TaggedStream::strict(c, std::move(entries));
}

// Imported nodes with several inputs get a stub copying input j to output j
// whenever every output has a matching input.
void register_identity_stubs(const Program& p, SimConfig& cfg) {
  for (const NodeDecl& node : p.nodes) {
    if (!node.imported || node.inputs.size() <= 1) continue;
    if (node.outputs.size() > node.inputs.size()) continue;
    cfg.stubs.emplace(node.name, [](const std::vector<TaggedStream>& in,
                                    const NodeSignature& sig) {
      std::vector<TaggedStream> out;
      for (std::size_t j = 0; j < sig.outputs.size(); ++j) {
        out.push_back(restamp_onto(in[j], sig.outputs[j].type.clock));
      }
      return out;
    });
  }
}

int run_check(const std::string& path, bool json, bool strict_start_dates) {
  CheckOptions options;
  options.strict_start_dates = strict_start_dates;
  FrontendResult fr = run_frontend(path, options);
  if (!fr.parsed) return kExitUsage;
  return report(std::move(fr.diagnostics), json);
}

int run_emit(const std::string& path, const std::string& out_path) {
  FrontendResult fr = run_frontend(path, CheckOptions{});
  if (!fr.parsed) return kExitUsage;
  if (report(fr.diagnostics, false) != 0) return kExitErrors;
  std::string ir = emit_typed_ir(fr.program, fr.checked);
  if (out_path.empty() || out_path == "-") {
    std::cout << ir;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }
  out << ir;
  return 0;
}

int run_simulate(const std::string& path, const std::string& node, long long hyperperiods,
                 const std::string& dump_path) {
  FrontendResult fr = run_frontend(path, CheckOptions{});
  if (!fr.parsed) return kExitUsage;
  if (report(fr.diagnostics, false) != 0) return kExitErrors;

  SimConfig cfg;
  cfg.horizon = hyperperiods;
  register_identity_stubs(fr.program, cfg);
  SimResult result;
  try {
    result = sim_node(fr.program, fr.checked, node, cfg);
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitErrors;
  }

  for (const std::string& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  if (!result.converged) {
    std::cerr << "warning: simulation of '" << node
              << "' did not reach every date before " << result.t_end.str() << "\n";
  }
  std::string dump = dump_streams(result.flows);
  if (dump_path.empty() || dump_path == "-") {
    std::cout << dump;
    return 0;
  }
  std::ofstream out(dump_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << dump_path << "'\n";
    return kExitUsage;
  }
  out << dump;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"preludec: frontend for a multi-rate synchronous dataflow language"};
  app.require_subcommand(1);

  std::string check_file;
  bool check_json = false;
  bool check_strict = false;
  CLI::App* check = app.add_subcommand("check", "Parse and clock-check a program");
  check->add_option("file", check_file, "Source file")->required();
  check->add_flag("--json", check_json, "Print diagnostics as JSON on stdout");
  check->add_flag("--strict-start-dates", check_strict,
                  "Reject flows whose start date is negative");

  std::string emit_file;
  std::string emit_out;
  std::string emit_format = "typed-ir";
  CLI::App* emit = app.add_subcommand("emit", "Emit typed flow IR for a checked program");
  emit->add_option("file", emit_file, "Source file")->required();
  emit->add_option("-o,--output", emit_out, "Output path (defaults to stdout)");
  emit->add_option("--format", emit_format, "Output format")
      ->check(CLI::IsMember({"typed-ir"}));

  std::string sim_file;
  std::string sim_node_name;
  std::string sim_dump;
  long long sim_hyperperiods = 1;
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a node over finite prefixes");
  simulate->add_option("file", sim_file, "Source file")->required();
  simulate->add_option("--node", sim_node_name, "Node to simulate")->required();
  simulate->add_option("--hyperperiods", sim_hyperperiods, "Horizon in hyperperiods")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--dump", sim_dump, "Write streams to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (check->parsed()) return run_check(check_file, check_json, check_strict);
  if (emit->parsed()) return run_emit(emit_file, emit_out);
  if (simulate->parsed()) {
    return run_simulate(sim_file, sim_node_name, sim_hyperperiods, sim_dump);
  }
  return kExitUsage;
}
