#pragma once

#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// Storage with separately sized power (GenCapacity, from projects.csv) and energy.
//
// storage.csv: project, charge_efficiency, discharge_efficiency, max_cycles_per_year,
//              can_provide_reserves, predetermined_energy_mwh
// storage_energy_costs.csv: project, period, energy_capital_cost ($/MWh)
//
// Variables: BuildStorageEnergy[g,v], ChargeStorage[g,tp], StateOfCharge[g,tp],
//            StorageReserveUp[g,tp] when reserves are allowed.
// Families:  StorageEnergyCapacity[g,p]; ZoneStorageCharge[z,tp] (withdrawal);
//            StorageEnergyCapitalCosts[p]; StorageReserve[a,tp] (reserve provision).
// Rows:      Storage_SOC, SOC_Max, Charge_Max, Discharge_Max [g,tp];
//            Storage_Reserve_Power, Storage_Reserve_Energy [g,tp];
//            Storage_Cycle_Limit[g,p]; Storage_Contingency_Limit[a,tp].
//
// Option storage_reserves: none | contingency | all. "contingency" caps storage
// reserve in each area at that area's contingency_mw.
class StorageModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kStorage, kDefineArguments | kLoadInputs | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void define_arguments(Options& options) override {
    options.declare("storage_reserves", "all", "reserve rights of storage: none, contingency or all");
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "storage", name::kStorage);
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    auto t = source.get("storage");
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& proj = t.text(r, "project");
      require_reference(data.project_index.contains(proj), t, r, "project", proj, "projects.csv");
      StorageParams sp;
      sp.charge_efficiency = t.real_or(r, "charge_efficiency", 1.0);
      sp.discharge_efficiency = t.real_or(r, "discharge_efficiency", 1.0);
      if (t.has_column("max_cycles_per_year")) {
        double c = t.real_or(r, "max_cycles_per_year", kInf);
        if (std::isfinite(c)) sp.max_cycles_per_year = c;
      }
      sp.can_provide_reserves = t.flag_or(r, "can_provide_reserves", true);
      sp.predetermined_energy_mwh = t.real_or(r, "predetermined_energy_mwh", 0.0);
      if (!(sp.charge_efficiency > 0 && sp.charge_efficiency <= 1) ||
          !(sp.discharge_efficiency > 0 && sp.discharge_efficiency <= 1)) {
        fail(ErrorKind::InputError, "storage.csv row " + std::to_string(r + 1) + ": efficiencies must lie in (0,1]");
      }
      if ((sp.max_cycles_per_year && *sp.max_cycles_per_year < 0) || sp.predetermined_energy_mwh < 0) {
        fail(ErrorKind::InputError, "storage.csv row " + std::to_string(r + 1) + ": negative value");
      }
      auto& g = data.projects[data.project_index[proj]];
      if (g.is_variable) fail(ErrorKind::InputError, "storage project " + proj + " cannot be variable");
      g.storage = sp;
    }
    if (source.has("storage_energy_costs")) {
      auto c = source.get("storage_energy_costs");
      for (std::size_t r = 0; r < c.size(); ++r) {
        const auto& proj = c.text(r, "project");
        const auto& period = c.text(r, "period");
        require_reference(data.project_index.contains(proj) && data.project(proj).is_storage(), c, r, "project", proj,
                          "storage.csv");
        require_reference(ts.has_period(period), c, r, "period", period, "periods.csv");
        data.projects[data.project_index[proj]].storage->energy_capital_cost[period] =
            c.real(r, "energy_capital_cost");
      }
    }
    for (const auto& g : data.projects) {
      if (!g.is_storage()) continue;
      for (const auto& [v, cost] : g.capital_cost) {
        if (!g.storage->energy_capital_cost.contains(v)) {
          fail(ErrorKind::MissingEnergyCost, "storage project " + g.name + " is buildable in " + v +
                                                 " but storage_energy_costs.csv has no row for it");
        }
      }
    }
  }

  static bool reserves_allowed(const ModuleContext& ctx, const GenerationProject& g) {
    return ctx.active(name::kSpinningReserves) && g.storage->can_provide_reserves &&
           ctx.options.text("storage_reserves") != "none";
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const auto& mode = ctx.options.text("storage_reserves");
    if (mode != "none" && mode != "contingency" && mode != "all") {
      fail(ErrorKind::ConfigError, "storage_reserves must be none, contingency or all, not '" + mode + "'");
    }
    if (!ctx.data.financials) fail(ErrorKind::MissingInput, "storage requires financials.csv (module financials)");
    const auto& fin = *ctx.data.financials;
    FamilyBuilder energy_cap, charge, costs, reserve;
    for (std::size_t p = 0; p < ts.periods().size(); ++p) costs.touch({period_label(ts, p)});
    for (const auto& z : ctx.data.zones)
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) charge.touch({z, tp_id(ts, tp)});
    bool any_reserve = false;

    for (const auto& g : ctx.data.projects) {
      if (!g.is_storage()) continue;
      const auto& sp = *g.storage;
      std::vector<std::pair<int, VarId>> builds;
      for (const auto& period : ts.periods()) {
        if (!g.capital_cost.contains(period.label)) continue;
        builds.push_back({period.start_year, model.add_variable("BuildStorageEnergy", {g.name, period.label})});
      }
      const double annuity = crf(fin.interest_rate, g.max_age_years);
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        const auto& period = ts.periods()[p];
        for (const auto& [year, var] : builds) {
          if (!vintage_active(year, g.max_age_years, period.start_year)) continue;
          const auto& vlabel = vintage_period(ts, year).label;
          costs.add({period.label}, var, sp.energy_capital_cost.at(vlabel) * annuity);
        }
        if (!operable(ts, g, p)) continue;
        IndexKey key{g.name, period.label};
        energy_cap.touch(key);
        if (available_capacity(g, period, g.predetermined) > 0) {
          energy_cap.add_constant(key, sp.predetermined_energy_mwh);
        }
        for (const auto& [year, var] : builds)
          if (vintage_active(year, g.max_age_years, period.start_year)) energy_cap.add(key, var, 1.0);
      }
      const bool res = reserves_allowed(ctx, g);
      for (auto tp : project_timepoints(ts, g)) {
        IndexKey key{g.name, tp_id(ts, tp)};
        charge.add({g.zone, tp_id(ts, tp)}, model.add_variable("ChargeStorage", key), 1.0);
        model.add_variable("StateOfCharge", key);
        if (res) {
          reserve.add({ctx.data.area_of(g.zone), tp_id(ts, tp)}, model.add_variable("StorageReserveUp", key), 1.0);
          any_reserve = true;
        }
      }
    }
    model.define_family("StorageEnergyCapacity", energy_cap.build());
    model.define_family("ZoneStorageCharge", charge.build());
    model.define_family("StorageEnergyCapitalCosts", costs.build());
    model.register_component(ComponentKind::Withdrawal, "ZoneStorageCharge");
    model.register_component(ComponentKind::CostPerPeriod, "StorageEnergyCapitalCosts");
    if (any_reserve) {
      for (const auto& a : ctx.data.areas())
        for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) reserve.touch({a, tp_id(ts, tp)});
      model.define_family("StorageReserve", reserve.build());
      model.register_component(ComponentKind::ReserveProvision, "StorageReserve");
    }
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& g : ctx.data.projects) {
      if (!g.is_storage()) continue;
      const auto& sp = *g.storage;
      const bool res = reserves_allowed(ctx, g);
      auto v = [&](const char* component, std::size_t tp) { return var_expr(model, component, {g.name, tp_id(ts, tp)}); };
      for (auto tp : project_timepoints(ts, g)) {
        const auto& tpid = tp_id(ts, tp);
        IndexKey key{g.name, tpid};
        const auto& plabel = period_label(ts, ts.period_of(tp));
        const double dur = ts.duration(tp);
        auto power = model.family_value("GenCapacity", {g.name, plabel});
        auto energy = model.family_value("StorageEnergyCapacity", {g.name, plabel});
        auto discharge = v("DispatchGen", tp);
        auto charge = v("ChargeStorage", tp);
        auto soc = v("StateOfCharge", tp);

        ExpressionBuilder balance;
        balance.add(soc).add(charge, -sp.charge_efficiency * dur).add(discharge, dur / sp.discharge_efficiency);
        if (auto prev = ts.predecessor(tp)) balance.add(v("StateOfCharge", *prev), -1.0);
        model.add_constraint("Storage_SOC", key, balance.build(), Sense::Equal, 0.0);
        model.add_constraint("SOC_Max", key, soc - energy, Sense::LessEqual, 0.0);
        model.add_constraint("Charge_Max", key, charge - power, Sense::LessEqual, 0.0);
        model.add_constraint("Discharge_Max", key, discharge - power, Sense::LessEqual, 0.0);
        if (res) {
          auto r = v("StorageReserveUp", tp);
          model.add_constraint("Storage_Reserve_Power", key, r + discharge - charge - power, Sense::LessEqual, 0.0);
          model.add_constraint("Storage_Reserve_Energy", key, r.scaled(dur) - soc.scaled(sp.discharge_efficiency),
                               Sense::LessEqual, 0.0);
        }
      }
      if (!sp.max_cycles_per_year) continue;
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        if (!operable(ts, g, p)) continue;
        const auto& period = ts.periods()[p];
        ExpressionBuilder row;
        for (auto tp : ts.timepoints_in_period(p)) row.add(v("DispatchGen", tp), ts.weight(tp) / period.length_years);
        row.add(model.family_value("StorageEnergyCapacity", {g.name, period.label}), -*sp.max_cycles_per_year);
        model.add_constraint("Storage_Cycle_Limit", {g.name, period.label}, row.build(), Sense::LessEqual, 0.0);
      }
    }
    if (ctx.options.text("storage_reserves") == "contingency" && model.has_family("StorageReserve")) {
      for (const auto& a : ctx.data.areas()) {
        const double limit = ctx.data.reserve_params.at(a).contingency_mw;
        for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
          model.add_constraint("Storage_Contingency_Limit", {a, tp_id(ts, tp)},
                               model.family_value("StorageReserve", {a, tp_id(ts, tp)}), Sense::LessEqual, limit);
        }
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"storage_dispatch", {"project", "timepoint", "charge_mw", "discharge_mw", "soc_mwh"}, {}};
    OutputTable b{"storage_builds", {"project", "period", "energy_build_mwh", "energy_capacity_mwh"}, {}};
    for (const auto& g : ctx.data.projects) {
      if (!g.is_storage()) continue;
      for (auto tp : project_timepoints(ts, g)) {
        IndexKey key{g.name, tp_id(ts, tp)};
        t.add({g.name, key[1], fmt_num(sol.value(model.variable_id("ChargeStorage", key))),
               fmt_num(sol.value(model.variable_id("DispatchGen", key))),
               fmt_num(sol.value(model.variable_id("StateOfCharge", key)))});
      }
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        if (!operable(ts, g, p)) continue;
        IndexKey key{g.name, period_label(ts, p)};
        auto build = model.find_variable(indexed_name("BuildStorageEnergy", key));
        b.add({g.name, key[1], fmt_num(build.valid() ? sol.value(build) : 0.0),
               fmt_num(sol.evaluate(model.family_value("StorageEnergyCapacity", key)))});
      }
    }
    out.push_back(std::move(b));
    out.push_back(std::move(t));
  }

 private:
  static const Period& vintage_period(const TimescaleSet& ts, int start_year) {
    for (const auto& p : ts.periods())
      if (p.start_year == start_year) return p;
    fail(ErrorKind::IntegrityError, "no period starts in " + std::to_string(start_year));
  }
};

}  // namespace gridopt::modules
