#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/catalog.hpp"
#include "gridopt/solver/branch_and_bound.hpp"
#include "gridopt/solver/external.hpp"
#include "gridopt/solver/standard_form.hpp"

namespace gridopt {

// A built model together with the inputs and module instances that made it.
// Not movable: the context holds references into the run.
class ModelRun {
 public:
  ModelRun() : ctx{data, options, module_names, warnings} {}
  ModelRun(const ModelRun&) = delete;
  ModelRun& operator=(const ModelRun&) = delete;

  std::vector<std::string> module_names;
  std::vector<std::unique_ptr<Module>> modules;
  Dataset data;
  Options options;
  std::vector<std::string> warnings;
  ModelGraph model;
  ModuleContext ctx;
  std::map<std::string, double> phase_seconds;
};

namespace detail {

inline void check_cross_references(const ModelRun& run) {
  const auto& data = run.data;
  const bool zones = run.ctx.active(modules::name::kLoadZones);
  const bool sources = run.ctx.active(modules::name::kSourceProperties);
  for (std::size_t i = 0; i < data.projects.size(); ++i) {
    const auto& g = data.projects[i];
    if (zones && !data.has_zone(g.zone)) {
      fail(ErrorKind::IntegrityError, "projects.csv row " + std::to_string(i + 1) + " zone '" + g.zone +
                                          "' has no matching row in load_zones.csv");
    }
    for (const auto& s : g.energy_sources) {
      if (sources && !data.sources.contains(s)) {
        fail(ErrorKind::IntegrityError, "projects.csv row " + std::to_string(i + 1) + " energy source '" + s +
                                            "' has no matching row in energy_sources.csv");
      }
    }
  }
  for (const auto& [key, market] : data.fuel_market) {
    if (zones && !data.has_zone(key.first)) {
      fail(ErrorKind::IntegrityError, "zone_fuel_markets.csv zone '" + key.first + "' has no matching row in load_zones.csv");
    }
  }
}

template <typename F>
void timed(ModelRun& run, const std::string& phase, F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  run.phase_seconds[phase] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// Runs define_arguments and load_inputs for every module in list order.
// `overrides` are applied after all options are declared.
inline std::unique_ptr<ModelRun> load_run(const std::vector<std::string>& module_names, const io::TableSource& source,
                                          const std::map<std::string, std::string>& overrides = {},
                                          const ModuleCatalog& catalog = modules::builtin_catalog()) {
  if (module_names.empty()) fail(ErrorKind::ConfigError, "module list is empty");
  auto run = std::make_unique<ModelRun>();
  std::vector<ModuleDescriptor> registered;
  for (const auto& name : module_names) {
    auto module = catalog.create(name);
    registered = register_module(module->descriptor(), std::move(registered), catalog);
    run->modules.push_back(std::move(module));
  }
  run->module_names = module_names;

  detail::timed(*run, "define_arguments", [&] {
    for (auto& m : run->modules) m->define_arguments(run->options);
    for (const auto& [k, v] : overrides) run->options.set(k, v);
  });
  run->model.advance_to(Phase::LoadInputs);
  detail::timed(*run, "load_inputs", [&] {
    for (auto& m : run->modules) m->load_inputs(source, run->ctx);
    detail::check_cross_references(*run);
  });
  return run;
}

// Runs define_components, then define_dynamic_components, then assembles the
// NPV objective.
inline void assemble(ModelRun& run) {
  auto& model = run.model;
  detail::timed(run, "define_components", [&] {
    model.advance_to(Phase::DefineComponents);
    for (auto& m : run.modules) m->define_components(model, run.ctx);
  });
  detail::timed(run, "define_dynamic_components", [&] {
    model.advance_to(Phase::DefineDynamicComponents);
    for (auto& m : run.modules) m->define_dynamic_components(model, run.ctx);
    const auto& reg = model.registry();
    const bool has_costs =
        !reg.names(ComponentKind::CostPerPeriod).empty() || !reg.names(ComponentKind::CostPerTimepoint).empty();
    if (run.data.financials && run.data.timescales) {
      model.set_objective(build_objective(model, *run.data.timescales, *run.data.financials));
    } else if (has_costs) {
      fail(ErrorKind::MissingInput, "cost components are registered but financials.csv is not loaded (module financials)");
    }
    for (auto kind : {ComponentKind::Injection, ComponentKind::Withdrawal, ComponentKind::ReserveProvision,
                      ComponentKind::ReserveRequirement}) {
      for (const auto& name : reg.names(kind)) (void)model.family(name);
    }
    model.advance_to(Phase::Assembled);
  });
}

inline std::unique_ptr<ModelRun> build_model(const std::vector<std::string>& module_names,
                                             const io::TableSource& source,
                                             const std::map<std::string, std::string>& overrides = {},
                                             const ModuleCatalog& catalog = modules::builtin_catalog()) {
  auto run = load_run(module_names, source, overrides, catalog);
  assemble(*run);
  return run;
}

// Solves an assembled run with the configured backend.
inline solver::Solution solve_run(ModelRun& run, const solver::SolverOptions& opts,
                                  const std::filesystem::path& work_dir = std::filesystem::temp_directory_path()) {
  solver::Solution sol;
  detail::timed(run, "solve", [&] {
    auto lp = solver::to_standard_form(run.model);
    if (opts.backend == solver::Backend::External) {
      auto parsed = solver::solve_external(lp, opts, work_dir);
      for (auto& w : parsed.warnings) run.warnings.push_back(std::move(w));
      sol = std::move(parsed.solution);
    } else {
      sol = solver::solve(lp, opts);
    }
  });
  return sol;
}

inline std::vector<OutputTable> post_solve(ModelRun& run, const solver::Solution& sol) {
  std::vector<OutputTable> tables;
  detail::timed(run, "post_solve", [&] {
    for (auto& m : run.modules) m->post_solve(run.model, run.ctx, sol, tables);
  });
  return tables;
}

}  // namespace gridopt
