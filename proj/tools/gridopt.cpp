// gridopt command-line front end: run, batch, validate, export-lp, modules.
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gridopt/app/cli.hpp"

namespace {

using namespace gridopt;
namespace fs = std::filesystem;

constexpr const char* kSolverEnv = "GRIDOPT_SOLVER_CMD";

struct CommonArgs {
  std::string modules;
  std::string inputs;
  std::vector<std::string> sets;
  std::string backend = "internal";
  double mip_gap = 1e-6;
  long long max_nodes = 200000;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("-m,--modules", a.modules, "module list file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-i,--inputs", a.inputs, "input directory")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("-s,--set", a.sets, "option override key=value (repeatable)");
}

void add_solver(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--backend", a.backend, "internal or external")
      ->check(CLI::IsMember({"internal", "external"}));
  cmd->add_option("--mip-gap", a.mip_gap, "relative MIP gap");
  cmd->add_option("--max-nodes", a.max_nodes, "branch-and-bound node limit");
}

std::map<std::string, std::string> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, std::string> out;
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, "--set needs key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

solver::SolverOptions solver_options(const CommonArgs& a) {
  solver::SolverOptions opts;
  opts.relative_mip_gap = a.mip_gap;
  opts.max_nodes = a.max_nodes;
  if (a.backend == "external") {
    const char* cmd = std::getenv(kSolverEnv);
    if (!cmd || !*cmd) fail(ErrorKind::ConfigError, std::string("external backend needs ") + kSolverEnv);
    opts.backend = solver::Backend::External;
    opts.external_command = cmd;
  }
  return opts;
}

void print_report(const app::RunReport& r) {
  if (r.status == "error") {
    std::cerr << r.scenario << ": " << r.message << '\n';
    return;
  }
  std::cout << r.scenario << ": " << r.status << " objective " << app::format_exact(r.objective) << " ("
            << r.variables << " variables, " << r.constraints << " constraints)\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"gridopt: capacity-expansion and production-cost optimization"};
  cli.require_subcommand(1);

  CommonArgs run_args;
  std::string run_outputs = "outputs", run_name = "scenario";
  bool run_export = false, run_allow = false;
  auto* run = cli.add_subcommand("run", "build, solve and report one scenario");
  add_common(run, run_args);
  add_solver(run, run_args);
  run->add_option("-o,--outputs", run_outputs, "output directory");
  run->add_option("-n,--name", run_name, "scenario name");
  run->add_flag("--export-lp", run_export, "also write model.lp");
  run->add_flag("--allow-nonoptimal", run_allow, "exit 0 whatever the solver status");

  std::string batch_file, batch_summary;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  CommonArgs batch_args;
  auto* batch = cli.add_subcommand("batch", "run every scenario in a scenario list file");
  batch->add_option("scenarios", batch_file, "scenario list")->required()->check(CLI::ExistingFile);
  batch->add_option("-j,--jobs", jobs, "parallel scenarios");
  batch->add_option("--summary", batch_summary, "batch summary CSV (default: next to the list)");
  add_solver(batch, batch_args);

  CommonArgs val_args;
  auto* validate = cli.add_subcommand("validate", "load and check inputs without solving");
  add_common(validate, val_args);

  CommonArgs lp_args;
  std::string lp_out = "model.lp";
  auto* export_lp = cli.add_subcommand("export-lp", "write the LP file without solving");
  add_common(export_lp, lp_args);
  export_lp->add_option("-o,--output", lp_out, "LP file path");

  auto* list = cli.add_subcommand("modules", "list built-in modules");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*run) {
      app::ScenarioConfig c;
      c.name = run_name;
      c.module_list = run_args.modules;
      c.inputs_dir = run_args.inputs;
      c.outputs_dir = run_outputs;
      c.overrides = parse_sets(run_args.sets);
      c.solver = solver_options(run_args);
      c.export_lp = run_export;
      c.allow_nonoptimal = run_allow;
      auto report = app::run_scenario(c);
      print_report(report);
      return report.exit_code;
    }
    if (*batch) {
      app::ScenarioConfig defaults;
      defaults.solver = solver_options(batch_args);
      auto configs = app::read_scenario_list(batch_file, defaults);
      auto reports = app::run_batch(configs, jobs);
      fs::path summary = batch_summary.empty() ? fs::path(batch_file).parent_path() / "batch_summary.csv"
                                               : fs::path(batch_summary);
      app::write_text(summary, app::batch_summary_csv(reports));
      int code = 0;
      for (const auto& r : reports) {
        print_report(r);
        code = std::max(code, r.exit_code);
      }
      std::cout << "summary: " << summary.string() << '\n';
      return code;
    }
    if (*validate) {
      auto modules = app::read_module_list(val_args.modules);
      io::DirectorySource source(val_args.inputs);
      auto r = build_model(modules, source, parse_sets(val_args.sets));
      for (const auto& w : r->warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "inputs valid: " << r->data.zones.size() << " zones, " << r->data.projects.size()
                << " projects, " << (r->data.timescales ? r->data.timescales->periods().size() : 0) << " periods; "
                << r->model.variables().size() << " variables, " << r->model.constraints().size()
                << " constraints\n";
      return app::kExitOptimal;
    }
    if (*export_lp) {
      auto modules = app::read_module_list(lp_args.modules);
      io::DirectorySource source(lp_args.inputs);
      auto r = build_model(modules, source, parse_sets(lp_args.sets));
      solver::write_lp_file(solver::to_standard_form(r->model), lp_out);
      std::cout << "wrote " << lp_out << '\n';
      return app::kExitOptimal;
    }
    if (*list) {
      for (const auto& n : modules::builtin_catalog().names()) std::cout << n << '\n';
      return app::kExitOptimal;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return app::exit_code_for(e.kind());
  }
  return app::kExitOptimal;
}
