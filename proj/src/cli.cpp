#include "portarb/cli.hpp"

#include <algorithm>
#include <optional>

#include <CLI11.hpp>

#include "portarb/compiler.hpp"
#include "portarb/error.hpp"
#include "portarb/model.hpp"
#include "portarb/pipeline.hpp"
#include "portarb/simnet.hpp"

namespace portarb
{

namespace
{

struct Inputs
{
  BehaviorModel model;
  NetworkDescription network;
};

Inputs load_inputs(const std::string& model_path, const std::string& network_path)
{
  const std::string model_text = read_file(model_path);
  const std::string network_text = read_file(network_path);
  return {parse_behavior_model(model_text), parse_network(network_text)};
}

void print(const std::vector<Diagnostic>& diagnostics, std::ostream& err)
{
  for (const auto& d : diagnostics)
    err << d.str() << "\n";
}

// Prints every diagnostic and maps the compilation to an exit status.
int report(const Compilation& c, bool strict, std::ostream& err)
{
  print(c.validation.diagnostics, err);
  if (!c.ok())
    return kExitValidation;
  print(c.conflicts, err);
  if (strict && c.has_warnings())
    return kExitValidation;
  return kExitOk;
}

struct CompileArgs
{
  std::string model, network, format = "text", out_path;
  bool auto_observe = false, strict = false;
};

int cmd_compile(const CompileArgs& a, std::ostream& out, std::ostream& err)
{
  const Inputs in = load_inputs(a.model, a.network);
  const Compilation c = compile(in.model, in.network, a.auto_observe);
  if (int status = report(c, a.strict, err); status != kExitOk)
    return status;
  const std::string text =
      emit_rules(c.rules, a.format == "json" ? RuleFormat::Json : RuleFormat::Text);
  if (a.out_path.empty())
    out << text;
  else
    write_file(a.out_path, text);
  return kExitOk;
}

int cmd_validate(const CompileArgs& a, std::ostream& err)
{
  const Inputs in = load_inputs(a.model, a.network);
  return report(compile(in.model, in.network, a.auto_observe), a.strict, err);
}

struct SimulateArgs
{
  std::string scenario, trace_path;
  std::optional<TimeMs> until;
  bool strict = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
  const Scenario scenario = load_scenario(a.scenario);
  const Inputs in = load_inputs(scenario.model_path, scenario.network_path);
  const Compilation c = compile(in.model, in.network, scenario.auto_observe);
  if (int status = report(c, a.strict, err); status != kExitOk)
    return status;
  const Trace trace = run(scenario, c.validation.network, c.rules, RunOptions{a.until});
  if (!a.trace_path.empty())
    write_trace(trace, a.trace_path);
  out << summarize(trace, c.validation.network);
  return kExitOk;
}

struct ExplainArgs
{
  std::string trace_path;
  std::optional<TimeMs> at;
  std::string port;
};

int cmd_explain(const ExplainArgs& a, std::ostream& out)
{
  const std::vector<TraceRecord> records = parse_trace(read_file(a.trace_path));
  if (!a.port.empty() && !PortName::is_valid(a.port))
    throw ParseError("invalid port name '" + a.port + "'");
  bool any = false;
  for (size_t i = 0; i < records.size(); ++i) {
    const TraceRecord& r = records[i];
    if (a.at && r.t != *a.at)
      continue;
    if (!a.port.empty() && r.dst.str() != a.port)
      continue;
    out << explain(records, i);
    any = true;
  }
  if (!any)
    out << "no records\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Compile behavior models into port arbitration rules and simulate them",
               "portarb"};
  app.require_subcommand(1);

  CompileArgs compile_args;
  auto* compile_cmd = app.add_subcommand("compile", "Extract arbitration rules from a model");
  compile_cmd->add_option("model", compile_args.model, "Behavior description XML")->required();
  compile_cmd->add_option("network", compile_args.network, "Application description XML")
      ->required();
  compile_cmd->add_flag("--auto-observe", compile_args.auto_observe,
                        "Add missing observer connections (reported as warnings)");
  compile_cmd->add_option("--format", compile_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  compile_cmd->add_option("--out", compile_args.out_path, "Write rules to this file");
  compile_cmd->add_flag("--strict", compile_args.strict, "Treat warnings as failures");

  CompileArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model against a network");
  validate_cmd->add_option("model", validate_args.model, "Behavior description XML")->required();
  validate_cmd->add_option("network", validate_args.network, "Application description XML")
      ->required();
  validate_cmd->add_flag("--auto-observe", validate_args.auto_observe,
                         "Add missing observer connections (reported as warnings)");
  validate_cmd->add_flag("--strict", validate_args.strict, "Treat warnings as failures");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario through the arbiters");
  simulate_cmd->add_option("scenario", simulate_args.scenario, "Scenario JSON")->required();
  simulate_cmd->add_option("--trace", simulate_args.trace_path, "Write the JSON-lines trace here");
  simulate_cmd->add_option("--until", simulate_args.until, "Stop before this time (ms)")
      ->check(CLI::NonNegativeNumber);
  simulate_cmd->add_flag("--strict", simulate_args.strict, "Treat warnings as failures");

  ExplainArgs explain_args;
  auto* explain_cmd = app.add_subcommand("explain", "Explain decisions recorded in a trace");
  explain_cmd->add_option("trace", explain_args.trace_path, "Trace file")->required();
  explain_cmd->add_option("--at", explain_args.at, "Only records at this time (ms)");
  explain_cmd->add_option("--port", explain_args.port, "Only records at this input port");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (compile_cmd->parsed())
      return cmd_compile(compile_args, out, err);
    if (validate_cmd->parsed())
      return cmd_validate(validate_args, err);
    if (simulate_cmd->parsed())
      return cmd_simulate(simulate_args, out, err);
    return cmd_explain(explain_args, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace portarb
