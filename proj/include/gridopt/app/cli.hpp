#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gridopt/app/engine.hpp"
#include "gridopt/solver/lp_writer.hpp"

namespace gridopt::app {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOptimal = 0,
  kExitInfeasible = 2,
  kExitUnbounded = 3,
  kExitConfig = 4,
  kExitSolverFailure = 5,
};

// One module name per line; blank lines and '#' comments are skipped.
inline std::vector<std::string> read_module_list(const fs::path& path,
                                                 const ModuleCatalog& catalog = modules::builtin_catalog()) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open module list " + path.string());
  std::vector<std::string> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto name = std::string(io::trim(line));
    if (name.empty()) continue;
    if (!catalog.contains(name)) {
      fail(ErrorKind::UnknownModule, path.filename().string() + " line " + std::to_string(number) +
                                         ": no module named '" + name + "'");
    }
    if (std::find(out.begin(), out.end(), name) != out.end()) {
      fail(ErrorKind::DuplicateModule,
           path.filename().string() + " line " + std::to_string(number) + ": module '" + name + "' listed twice");
    }
    out.push_back(name);
  }
  return out;
}

struct ScenarioConfig {
  std::string name = "scenario";
  fs::path module_list;
  fs::path inputs_dir;
  fs::path outputs_dir;
  std::map<std::string, std::string> overrides;
  solver::SolverOptions solver;
  bool allow_nonoptimal = false;  // exit 0 even when no optimum is proven
  bool export_lp = false;         // also write model.lp to the outputs
};

struct RunReport {
  std::string scenario;
  std::string status;  // solver status, or "error"
  double objective = 0.0;
  int exit_code = kExitOptimal;
  std::string message;
  std::vector<std::string> warnings;
  std::vector<std::string> manifest;  // files written, relative to outputs_dir
  std::map<std::string, double> phase_seconds;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IterationLimit:
    case ErrorKind::NodeLimit:
    case ErrorKind::SolverProcessFailure:
    case ErrorKind::ParseError:
      return kExitSolverFailure;
    default:
      return kExitConfig;
  }
}

inline int exit_code_for(solver::Status status, bool allow_nonoptimal) {
  if (allow_nonoptimal) return kExitOptimal;
  switch (status) {
    case solver::Status::Optimal: return kExitOptimal;
    case solver::Status::Infeasible: return kExitInfeasible;
    case solver::Status::Unbounded: return kExitUnbounded;
    case solver::Status::GapLimit: return kExitSolverFailure;
  }
  return kExitSolverFailure;
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  out << text;
}

inline io::DirectorySource open_inputs(const ScenarioConfig& config) { return io::DirectorySource(config.inputs_dir); }

// build -> solve -> post_solve, writing every table plus summary.csv.
// Never throws: failures are reported through RunReport.
inline RunReport run_scenario(const ScenarioConfig& config) {
  RunReport report;
  report.scenario = config.name;
  auto record = [&](const std::string& file, const std::string& text) {
    write_text(config.outputs_dir / file, text);
    report.manifest.push_back(file);
  };
  try {
    auto modules = read_module_list(config.module_list);
    auto source = open_inputs(config);
    fs::create_directories(config.outputs_dir);
    auto run = build_model(modules, source, config.overrides);
    report.variables = run->model.variables().size();
    report.constraints = run->model.constraints().size();
    if (config.export_lp) record("model.lp", solver::write_lp_string(solver::to_standard_form(run->model)));
    auto sol = solve_run(*run, config.solver, config.outputs_dir / "solver");
    report.status = std::string(solver::to_string(sol.status));
    report.objective = sol.objective;
    report.exit_code = exit_code_for(sol.status, config.allow_nonoptimal);
    if (sol.status == solver::Status::Optimal || sol.status == solver::Status::GapLimit) {
      for (const auto& t : post_solve(*run, sol)) record(t.name + ".csv", t.to_csv());
    }
    report.warnings = run->warnings;
    report.phase_seconds = run->phase_seconds;
    std::string summary = "scenario,status,objective,mip_gap,iterations,nodes,variables,constraints\n";
    summary += config.name + ',' + report.status + ',' + format_exact(sol.objective) + ',' + format_exact(sol.mip_gap) +
               ',' + std::to_string(sol.iterations) + ',' + std::to_string(sol.nodes) + ',' +
               std::to_string(report.variables) + ',' + std::to_string(report.constraints) + '\n';
    record("summary.csv", summary);
    if (!report.warnings.empty()) {
      std::string text;
      for (const auto& w : report.warnings) text += w + '\n';
      record("warnings.txt", text);
    }
  } catch (const Error& e) {
    report.status = "error";
    report.message = e.what();
    report.exit_code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report.status = "error";
    report.message = e.what();
    report.exit_code = kExitConfig;
  }
  return report;
}

// Scenario list line: name [--modules P] [--inputs D] [--outputs D] [--set key=value]...
//                          [--backend internal|external] [--allow-nonoptimal] [--export-lp]
// Relative paths resolve against `base_dir`; outputs default to <base_dir>/outputs/<name>.
inline ScenarioConfig parse_scenario_line(const std::string& line, const fs::path& base_dir,
                                          const ScenarioConfig& defaults = {}) {
  std::istringstream in(line);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  if (tok.empty()) fail(ErrorKind::ConfigError, "empty scenario line");
  ScenarioConfig c = defaults;
  c.name = tok[0];
  c.outputs_dir = base_dir / "outputs" / c.name;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  for (std::size_t i = 1; i < tok.size(); ++i) {
    const auto& flag = tok[i];
    auto value = [&]() -> const std::string& {
      if (i + 1 >= tok.size()) fail(ErrorKind::ConfigError, "scenario " + c.name + ": " + flag + " needs a value");
      return tok[++i];
    };
    if (flag == "--modules") c.module_list = resolve(value());
    else if (flag == "--inputs") c.inputs_dir = resolve(value());
    else if (flag == "--outputs") c.outputs_dir = resolve(value());
    else if (flag == "--set") {
      const auto& kv = value();
      auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ErrorKind::ConfigError, "scenario " + c.name + ": --set needs key=value");
      c.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    } else if (flag == "--backend") {
      const auto& b = value();
      if (b == "internal") c.solver.backend = solver::Backend::Internal;
      else if (b == "external") c.solver.backend = solver::Backend::External;
      else fail(ErrorKind::ConfigError, "scenario " + c.name + ": unknown backend " + b);
    } else if (flag == "--allow-nonoptimal") c.allow_nonoptimal = true;
    else if (flag == "--export-lp") c.export_lp = true;
    else fail(ErrorKind::ConfigError, "scenario " + c.name + ": unknown flag " + flag);
  }
  return c;
}

inline std::vector<ScenarioConfig> read_scenario_list(const fs::path& path, const ScenarioConfig& defaults = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open scenario list " + path.string());
  std::vector<ScenarioConfig> out;
  std::string line;
  const auto base = path.parent_path();
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (io::trim(line).empty()) continue;
    auto c = parse_scenario_line(line, base, defaults);
    for (const auto& other : out)
      if (other.name == c.name) fail(ErrorKind::ConfigError, "scenario name '" + c.name + "' appears twice");
    out.push_back(std::move(c));
  }
  return out;
}

// Runs scenarios on up to `parallelism` threads. Reports come back in input
// order; each scenario is independent, so results match a sequential run.
inline std::vector<RunReport> run_batch(const std::vector<ScenarioConfig>& configs, unsigned parallelism = 1) {
  std::vector<RunReport> reports(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) reports[i] = run_scenario(configs[i]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(configs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return reports;
}

inline std::string batch_summary_csv(const std::vector<RunReport>& reports) {
  std::string out = "scenario,status,objective,exit_code,message\n";
  for (const auto& r : reports) {
    auto msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out += r.scenario + ',' + r.status + ',' + (r.status == "error" ? "" : format_exact(r.objective)) + ',' +
           std::to_string(r.exit_code) + ',' + msg + '\n';
  }
  return out;
}

}  // namespace gridopt::app
