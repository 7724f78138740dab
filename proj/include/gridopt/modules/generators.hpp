#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// Projects, build options and existing capacity.
//
// Variables: BuildGen[g,v] for every (project, buildable vintage).
// Families:  GenCapacity[g,p] for every operable period;
//            GenCapitalCosts[p] (annualized capital + fixed O&M, per period).
class GenBuildModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kGenBuild, kLoadInputs | kDefineComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    if (!ctx.data.timescales) {
      fail(ErrorKind::MissingInput, "module generators.core.build requires the timepoint table (module timescales)");
    }
    const auto& ts = ctx.ts();
    require_table(source, "projects", name::kGenBuild);
    require_table(source, "build_costs", name::kGenBuild);
    auto& data = ctx.data;
    auto t = source.get("projects");
    for (std::size_t r = 0; r < t.size(); ++r) {
      GenerationProject g;
      g.name = t.text(r, "project");
      g.zone = t.text(r, "zone");
      g.max_age_years = static_cast<int>(t.integer(r, "max_age_years"));
      g.fixed_om = t.real_or(r, "fixed_om", 0.0);
      g.variable_om = t.real_or(r, "variable_om", 0.0);
      g.energy_sources = split_list(t.text(r, "energy_sources"));
      g.is_variable = t.flag_or(r, "is_variable", false);
      g.outage_derate = t.real_or(r, "outage_derate", 0.0);
      g.unit_size_mw = t.real_or(r, "unit_size_mw", 0.0);
      g.min_load_fraction = t.real_or(r, "min_load_fraction", 0.0);
      g.startup_cost = t.real_or(r, "startup_cost", 0.0);
      g.startup_fuel = t.real_or(r, "startup_fuel", 0.0);
      g.min_uptime_h = t.real_or(r, "min_uptime_h", 0.0);
      g.min_downtime_h = t.real_or(r, "min_downtime_h", 0.0);
      g.commit = t.flag_or(r, "commit", true);
      g.is_hydro_simple = t.flag_or(r, "is_hydro_simple", false);
      if (t.has_column("capacity_credit") && !io::trim(t.text(r, "capacity_credit")).empty() &&
          t.text(r, "capacity_credit") != ".") {
        g.capacity_credit = t.real(r, "capacity_credit");
      }
      if (g.max_age_years < 1 || g.outage_derate < 0 || g.outage_derate > 1 || g.min_load_fraction < 0 ||
          g.min_load_fraction > 1 || g.unit_size_mw < 0) {
        fail(ErrorKind::InputError, "projects.csv row " + std::to_string(r + 1) + ": parameter out of range");
      }
      if (data.project_index.contains(g.name)) fail(ErrorKind::Duplicate, "project " + g.name);
      g.capacity_factor.assign(ts.timepoints().size(), std::nan(""));
      data.project_index[g.name] = data.projects.size();
      data.projects.push_back(std::move(g));
    }
    auto bc = source.get("build_costs");
    for (std::size_t r = 0; r < bc.size(); ++r) {
      const auto& proj = bc.text(r, "project");
      const auto& period = bc.text(r, "period");
      require_reference(data.project_index.contains(proj), bc, r, "project", proj, "projects.csv");
      require_reference(ts.has_period(period), bc, r, "period", period, "periods.csv");
      data.projects[data.project_index[proj]].capital_cost[period] = bc.real(r, "capital_cost");
    }
    if (source.has("predetermined_builds")) {
      auto pb = source.get("predetermined_builds");
      for (std::size_t r = 0; r < pb.size(); ++r) {
        const auto& proj = pb.text(r, "project");
        require_reference(data.project_index.contains(proj), pb, r, "project", proj, "projects.csv");
        auto& g = data.projects[data.project_index[proj]];
        g.predetermined[static_cast<int>(pb.integer(r, "build_year"))] += pb.real(r, "capacity_mw");
      }
    }
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    if (!ctx.data.financials) fail(ErrorKind::MissingInput, "generators.core.build requires financials.csv (module financials)");
    const auto& fin = *ctx.data.financials;
    FamilyBuilder capacity, costs;
    for (std::size_t p = 0; p < ts.periods().size(); ++p) costs.touch({period_label(ts, p)});
    for (const auto& g : ctx.data.projects) {
      std::vector<std::pair<int, VarId>> builds;
      for (std::size_t v = 0; v < ts.periods().size(); ++v) {
        const auto& vp = ts.periods()[v];
        if (!g.capital_cost.contains(vp.label)) continue;
        builds.push_back({vp.start_year, model.add_variable("BuildGen", {g.name, vp.label})});
      }
      double annuity = crf(fin.interest_rate, g.max_age_years);
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        if (!operable(ts, g, p)) continue;
        const auto& period = ts.periods()[p];
        IndexKey key{g.name, period.label};
        capacity.touch(key);
        capacity.add_constant(key, available_capacity(g, period, g.predetermined));
        for (const auto& [year, var] : builds) {
          if (!vintage_active(year, g.max_age_years, period.start_year)) continue;
          capacity.add(key, var, 1.0);
        }
      }
      // Capital is charged in every period where the vintage is in service.
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        const auto& period = ts.periods()[p];
        for (std::size_t k = 0; k < builds.size(); ++k) {
          const auto& [year, var] = builds[k];
          if (!vintage_active(year, g.max_age_years, period.start_year)) continue;
          const auto& vintage = ts.periods()[ts.period_index(vintage_label(ts, year))];
          costs.add({period.label}, var, g.capital_cost.at(vintage.label) * annuity + g.fixed_om);
        }
        if (g.fixed_om != 0.0) {
          costs.add_constant({period.label}, g.fixed_om * available_capacity(g, period, g.predetermined));
        }
      }
    }
    model.define_family("GenCapacity", capacity.build());
    model.define_family("GenCapitalCosts", costs.build());
    model.register_component(ComponentKind::CostPerPeriod, "GenCapitalCosts");
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"builds", {"project", "zone", "period", "build_mw", "capacity_mw"}, {}};
    for (const auto& g : ctx.data.projects) {
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        const auto& label = period_label(ts, p);
        auto v = model.find_variable(indexed_name("BuildGen", {g.name, label}));
        bool has_cap = model.family("GenCapacity").contains({g.name, label});
        if (!v.valid() && !has_cap) continue;
        double build = v.valid() ? sol.value(v) : 0.0;
        double cap = has_cap ? sol.evaluate(model.family_value("GenCapacity", {g.name, label})) : 0.0;
        t.add({g.name, g.zone, label, fmt_num(build), fmt_num(cap)});
      }
    }
    out.push_back(std::move(t));
  }

 private:
  static std::string vintage_label(const TimescaleSet& ts, int start_year) {
    for (const auto& p : ts.periods())
      if (p.start_year == start_year) return p.label;
    fail(ErrorKind::IntegrityError, "no period starts in " + std::to_string(start_year));
  }
};

// Integer unit counts for projects with unit_size_mw > 0.
// Variables: BuildUnits[g,v] (integer). Rows: Discrete_Build[g,v].
class DiscreteBuildModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kDiscreteBuild, kDefineDynamicComponents}; }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (g.unit_size_mw <= 0) continue;
      for (const auto& p : ts.periods()) {
        if (!g.capital_cost.contains(p.label)) continue;
        auto build = model.variable_id("BuildGen", {g.name, p.label});
        auto units = model.add_variable("BuildUnits", {g.name, p.label}, 0.0, kInf, Integrality::Integer);
        model.add_constraint("Discrete_Build", {g.name, p.label},
                             LinearExpression(build) - LinearExpression(units, g.unit_size_mw), Sense::Equal, 0.0);
      }
    }
  }
};

// Dispatch variables and everything common to all operating modes.
//
// Variables: DispatchGen[g,tp] per project and operable timepoint;
//            FuelUse[g,tp,f] per fueled project, operable timepoint and fuel.
// Rows:      Dispatch_Upper_Limit[g,tp] for variable projects.
// Families:  ZoneGenDispatch[z,tp] (injection), GenVariableOMCosts[tp].
class GenDispatchModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kGenDispatch, kLoadInputs | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    if (source.has("capacity_factors")) {
      auto t = source.get("capacity_factors");
      for (std::size_t r = 0; r < t.size(); ++r) {
        const auto& proj = t.text(r, "project");
        const auto& tp = t.text(r, "timepoint");
        require_reference(data.project_index.contains(proj), t, r, "project", proj, "projects.csv");
        require_reference(ts.has_timepoint(tp), t, r, "timepoint", tp, "timepoints.csv");
        double cf = t.real(r, "cf");
        if (cf < 0) fail(ErrorKind::InputError, "capacity_factors.csv row " + std::to_string(r + 1) + ": negative cf");
        data.projects[data.project_index[proj]].capacity_factor[ts.timepoint_index(tp)] = cf;
      }
    }
    if (source.has("heat_rate_segments")) {
      auto t = source.get("heat_rate_segments");
      std::map<std::string, std::vector<std::pair<int, HeatRateSegment>>> by_project;
      for (std::size_t r = 0; r < t.size(); ++r) {
        const auto& proj = t.text(r, "project");
        require_reference(data.project_index.contains(proj), t, r, "project", proj, "projects.csv");
        by_project[proj].push_back({static_cast<int>(t.integer(r, "segment")),
                                    {t.real(r, "intercept"), t.real(r, "slope")}});
      }
      for (auto& [proj, segs] : by_project) {
        std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        auto& hr = data.projects[data.project_index[proj]].heat_rate;
        for (const auto& [idx, s] : segs) hr.push_back(s);
        validate_heat_rate(proj, hr);
      }
    }
  }

  static void validate_heat_rate(const std::string& proj, std::vector<HeatRateSegment>& hr) {
    std::sort(hr.begin(), hr.end(), [](const HeatRateSegment& a, const HeatRateSegment& b) { return a.slope < b.slope; });
    for (std::size_t k = 0; k < hr.size(); ++k) {
      if (hr[k].slope < 0 || hr[k].intercept < 0) {
        fail(ErrorKind::InputError, "heat rate segments of " + proj + " must be nonnegative");
      }
      if (k > 0 && (hr[k].slope <= hr[k - 1].slope || hr[k].intercept >= hr[k - 1].intercept)) {
        fail(ErrorKind::InputError,
             "heat rate segments of " + proj + " do not form a convex envelope (slopes rising, intercepts falling)");
      }
    }
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const auto& data = ctx.data;
    FamilyBuilder zone_dispatch, vom;
    for (const auto& z : data.zones)
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) zone_dispatch.touch({z, tp_id(ts, tp)});
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) vom.touch({tp_id(ts, tp)});

    for (const auto& g : data.projects) {
      const auto fuels = project_fuels(data, g);
      if (!fuels.empty() && g.heat_rate.empty()) {
        fail(ErrorKind::MissingInput, "fueled project " + g.name + " has no rows in heat_rate_segments.csv");
      }
      if (dispatchable(g) && !committed(ctx, g) && !ctx.active(name::kNoCommit)) {
        fail(ErrorKind::ConfigError, "project " + g.name +
                                         " has no dispatch limit: add generators.core.no_commit or "
                                         "generators.core.commit.operate");
      }
      for (auto tp : project_timepoints(ts, g)) {
        const auto& tpid = tp_id(ts, tp);
        auto dispatch = model.add_variable("DispatchGen", {g.name, tpid});
        zone_dispatch.add({g.zone, tpid}, dispatch, 1.0);
        if (g.variable_om != 0.0) vom.add({tpid}, dispatch, g.variable_om);
        for (const auto& f : fuels) model.add_variable("FuelUse", {g.name, tpid, f});
      }
    }
    model.define_family("ZoneGenDispatch", zone_dispatch.build());
    model.define_family("GenVariableOMCosts", vom.build());
    model.register_component(ComponentKind::Injection, "ZoneGenDispatch");
    model.register_component(ComponentKind::CostPerTimepoint, "GenVariableOMCosts");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (!g.is_variable) continue;
      for (auto tp : project_timepoints(ts, g)) {
        const auto& tpid = tp_id(ts, tp);
        double cf = g.capacity_factor[tp];
        if (std::isnan(cf)) {
          fail(ErrorKind::MissingInput, "capacity_factors.csv has no row for (" + g.name + ", " + tpid + ")");
        }
        auto cap = model.family_value("GenCapacity", {g.name, period_label(ts, ts.period_of(tp))});
        model.add_constraint("Dispatch_Upper_Limit", {g.name, tpid},
                             var_expr(model, "DispatchGen", {g.name, tpid}) - cap.scaled(cf), Sense::LessEqual, 0.0);
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"dispatch", {"project", "zone", "period", "timepoint", "dispatch_mw", "weight_h"}, {}};
    for (const auto& g : ctx.data.projects) {
      for (auto tp : project_timepoints(ts, g)) {
        auto v = model.variable_id("DispatchGen", {g.name, tp_id(ts, tp)});
        t.add({g.name, g.zone, period_label(ts, ts.period_of(tp)), tp_id(ts, tp), fmt_num(sol.value(v)),
               fmt_num(ts.weight(tp))});
      }
    }
    out.push_back(std::move(t));
  }
};

// Economic dispatch without commitment for dispatchable projects that are not
// committed: Dispatch_Upper_Limit[g,tp] and slope-only Fuel_Use_Rate[g,tp].
class NoCommitModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kNoCommit, kDefineDynamicComponents}; }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (!dispatchable(g) || committed(ctx, g)) continue;
      const auto fuels = project_fuels(ctx.data, g);
      for (auto tp : project_timepoints(ts, g)) {
        const auto& tpid = tp_id(ts, tp);
        auto dispatch = model.variable_id("DispatchGen", {g.name, tpid});
        auto cap = model.family_value("GenCapacity", {g.name, period_label(ts, ts.period_of(tp))});
        model.add_constraint("Dispatch_Upper_Limit", {g.name, tpid},
                             LinearExpression(dispatch) - cap.scaled(1.0 - g.outage_derate), Sense::LessEqual, 0.0);
        if (fuels.empty()) continue;
        ExpressionBuilder fuel;
        for (const auto& f : fuels) fuel.add(model.variable_id("FuelUse", {g.name, tpid, f}), 1.0);
        fuel.add(dispatch, -g.heat_rate.front().slope);
        model.add_constraint("Fuel_Use_Rate", {g.name, tpid}, fuel.build(), Sense::GreaterEqual, 0.0);
      }
    }
  }
};

// Linearized unit commitment for committed projects.
//
// Variables: Commit, Startup, Shutdown [g,tp]; ReserveUpGen[g,tp] when
//            spinning reserves are active.
// Rows:      Commit_Upper_Limit, Dispatch_Lower_Limit, Dispatch_Upper_Limit,
//            Commit_Transition, Min_Uptime, Min_Downtime [g,tp].
// Families:  StartupCosts[tp]; CommitReserveUp[area,tp] (reserve provision).
class CommitOperateModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kCommitOperate, kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  static std::size_t window(double hours, double duration, std::size_t series_length) {
    if (hours <= 0) return 0;
    auto steps = static_cast<std::size_t>(std::ceil(hours / duration - 1e-9));
    return std::min(std::max<std::size_t>(steps, 1), series_length);
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const bool reserves = ctx.active(name::kSpinningReserves);
    FamilyBuilder startup_costs, reserve;
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) startup_costs.touch({tp_id(ts, tp)});

    for (const auto& g : ctx.data.projects) {
      if (!committed(ctx, g)) continue;
      if (is_fueled(ctx.data, g) && !ctx.active(name::kCommitFuelUse)) {
        fail(ErrorKind::ConfigError, "committed fueled project " + g.name + " needs generators.core.commit.fuel_use");
      }
      const auto tps = project_timepoints(ts, g);
      for (auto tp : tps) {
        IndexKey key{g.name, tp_id(ts, tp)};
        model.add_variable("Commit", key);
        model.add_variable("Startup", key);
        model.add_variable("Shutdown", key);
        if (reserves) {
          reserve.add({ctx.data.area_of(g.zone), tp_id(ts, tp)}, model.add_variable("ReserveUpGen", key), 1.0);
        }
        if (g.startup_cost != 0.0) {
          startup_costs.add({tp_id(ts, tp)}, model.variable_id("Startup", key), g.startup_cost / ts.duration(tp));
        }
      }
    }
    model.define_family("StartupCosts", startup_costs.build());
    model.register_component(ComponentKind::CostPerTimepoint, "StartupCosts");
    if (reserves) {
      for (const auto& a : ctx.data.areas())
        for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) reserve.touch({a, tp_id(ts, tp)});
      model.define_family("CommitReserveUp", reserve.build());
      model.register_component(ComponentKind::ReserveProvision, "CommitReserveUp");
    }
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const bool reserves = ctx.active(name::kSpinningReserves);
    for (const auto& g : ctx.data.projects) {
      if (!committed(ctx, g)) continue;
      const auto tps = project_timepoints(ts, g);
      auto commit = [&](std::size_t tp) { return model.variable_id("Commit", {g.name, tp_id(ts, tp)}); };
      auto startup = [&](std::size_t tp) { return model.variable_id("Startup", {g.name, tp_id(ts, tp)}); };
      auto shutdown = [&](std::size_t tp) { return model.variable_id("Shutdown", {g.name, tp_id(ts, tp)}); };

      for (auto tp : tps) {
        const auto& tpid = tp_id(ts, tp);
        IndexKey key{g.name, tpid};
        auto cap = model.family_value("GenCapacity", {g.name, period_label(ts, ts.period_of(tp))})
                       .scaled(1.0 - g.outage_derate);
        auto dispatch = LinearExpression(model.variable_id("DispatchGen", key));
        model.add_constraint("Commit_Upper_Limit", key, LinearExpression(commit(tp)) - cap, Sense::LessEqual, 0.0);
        model.add_constraint("Dispatch_Lower_Limit", key,
                             dispatch - LinearExpression(commit(tp), g.min_load_fraction), Sense::GreaterEqual, 0.0);
        auto upper = dispatch - LinearExpression(commit(tp));
        if (reserves) upper = upper + var_expr(model, "ReserveUpGen", key);
        model.add_constraint("Dispatch_Upper_Limit", key, upper, Sense::LessEqual, 0.0);

        if (auto prev = ts.predecessor(tp)) {
          ExpressionBuilder change;
          change.add(commit(tp), 1.0).add(commit(*prev), -1.0).add(startup(tp), -1.0).add(shutdown(tp), 1.0);
          model.add_constraint("Commit_Transition", key, change.build(), Sense::Equal, 0.0);
        }

        const auto series_len = static_cast<std::size_t>(ts.series()[ts.series_of(tp)].num_timepoints);
        if (auto up = window(g.min_uptime_h, ts.duration(tp), series_len); up > 0) {
          ExpressionBuilder row;
          row.add(commit(tp), 1.0);
          for (std::size_t k = 0; k < up; ++k)
            if (auto b = ts.back(tp, k)) row.add(startup(*b), -1.0);
          model.add_constraint("Min_Uptime", key, row.build(), Sense::GreaterEqual, 0.0);
        }
        if (auto down = window(g.min_downtime_h, ts.duration(tp), series_len); down > 0) {
          ExpressionBuilder row;
          row.add(cap).add(commit(tp), -1.0);
          for (std::size_t k = 0; k < down; ++k)
            if (auto b = ts.back(tp, k)) row.add(shutdown(*b), -1.0);
          model.add_constraint("Min_Downtime", key, row.build(), Sense::GreaterEqual, 0.0);
        }
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"commitment", {"project", "timepoint", "commit_mw", "startup_mw", "shutdown_mw"}, {}};
    for (const auto& g : ctx.data.projects) {
      if (!committed(ctx, g)) continue;
      for (auto tp : project_timepoints(ts, g)) {
        IndexKey key{g.name, tp_id(ts, tp)};
        t.add({g.name, tp_id(ts, tp), fmt_num(sol.value(model.variable_id("Commit", key))),
               fmt_num(sol.value(model.variable_id("Startup", key))),
               fmt_num(sol.value(model.variable_id("Shutdown", key)))});
      }
    }
    out.push_back(std::move(t));
  }
};

// Multi-segment fuel use for committed projects:
// Fuel_Use_Segment[g,tp,s]: sum_f FuelUse >= intercept_s*Commit + slope_s*Dispatch
//                            + startup_fuel*Startup/duration.
class CommitFuelUseModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kCommitFuelUse, kDefineDynamicComponents}; }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (!committed(ctx, g)) continue;
      const auto fuels = project_fuels(ctx.data, g);
      if (fuels.empty()) continue;
      for (auto tp : project_timepoints(ts, g)) {
        const auto& tpid = tp_id(ts, tp);
        IndexKey key{g.name, tpid};
        for (std::size_t s = 0; s < g.heat_rate.size(); ++s) {
          ExpressionBuilder row;
          for (const auto& f : fuels) row.add(model.variable_id("FuelUse", {g.name, tpid, f}), 1.0);
          row.add(model.variable_id("Commit", key), -g.heat_rate[s].intercept);
          row.add(model.variable_id("DispatchGen", key), -g.heat_rate[s].slope);
          if (g.startup_fuel != 0.0) row.add(model.variable_id("Startup", key), -g.startup_fuel / ts.duration(tp));
          model.add_constraint("Fuel_Use_Segment", {g.name, tpid, std::to_string(s)}, row.build(), Sense::GreaterEqual,
                               0.0);
        }
      }
    }
  }
};

// Commit in whole units: CommitUnits[g,tp] integer, Discrete_Commit[g,tp].
class CommitDiscreteModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kCommitDiscrete, kDefineDynamicComponents}; }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    if (!ctx.active(name::kCommitOperate)) {
      fail(ErrorKind::ConfigError, "generators.core.commit.discrete requires generators.core.commit.operate");
    }
    for (const auto& g : ctx.data.projects) {
      if (!committed(ctx, g) || g.unit_size_mw <= 0) continue;
      for (auto tp : project_timepoints(ts, g)) {
        IndexKey key{g.name, tp_id(ts, tp)};
        auto units = model.add_variable("CommitUnits", key, 0.0, kInf, Integrality::Integer);
        model.add_constraint("Discrete_Commit", key,
                             LinearExpression(model.variable_id("Commit", key)) - LinearExpression(units, g.unit_size_mw),
                             Sense::Equal, 0.0);
      }
    }
  }
};

// Average water availability per sampled series for hydro projects:
// Hydro_Energy_Budget[g,ts]: sum_tp Dispatch*duration / series_hours <= avg flow.
class HydroSimpleModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kHydroSimple, kLoadInputs | kDefineDynamicComponents};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "hydro_flows", name::kHydroSimple);
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    auto t = source.get("hydro_flows");
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& proj = t.text(r, "project");
      const auto& series = t.text(r, "timeseries");
      require_reference(data.project_index.contains(proj), t, r, "project", proj, "projects.csv");
      require_reference(ts.has_series(series), t, r, "timeseries", series, "timeseries.csv");
      double flow = t.real(r, "avg_flow_mw");
      if (flow < 0) fail(ErrorKind::InputError, "hydro_flows.csv row " + std::to_string(r + 1) + ": negative flow");
      data.projects[data.project_index[proj]].hydro_avg_flow[series] = flow;
    }
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (!g.is_hydro_simple) continue;
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        if (!operable(ts, g, p)) continue;
        for (auto s : ts.series_in_period(p)) {
          const auto& sid = ts.series()[s].id;
          auto it = g.hydro_avg_flow.find(sid);
          if (it == g.hydro_avg_flow.end()) {
            fail(ErrorKind::MissingInput, "hydro_flows.csv has no row for (" + g.name + ", " + sid + ")");
          }
          ExpressionBuilder energy;
          for (auto tp : ts.timepoints_in_series(s)) {
            energy.add(model.variable_id("DispatchGen", {g.name, tp_id(ts, tp)}), ts.duration(tp) / ts.series_hours(s));
          }
          model.add_constraint("Hydro_Energy_Budget", {g.name, sid}, energy.build(), Sense::LessEqual, it->second);
        }
      }
    }
  }
};

}  // namespace gridopt::modules
