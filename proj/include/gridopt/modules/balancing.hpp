#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// Sum of every registered family of `kind` at `key`.
inline LinearExpression registered_sum(const ModelGraph& model, ComponentKind kind, const IndexKey& key) {
  ExpressionBuilder out;
  for (const auto& name : model.registry().names(kind)) out.add(model.family_value(name, key));
  return out.build();
}

// load_zones.csv: zone. zone_demand.csv: zone, timepoint, demand_mw.
// Rows: Energy_Balance[z,tp]: injections - withdrawals = demand.
class LoadZonesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kLoadZones, kLoadInputs | kDefineDynamicComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "load_zones", name::kLoadZones);
    require_table(source, "zone_demand", name::kLoadZones);
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    auto zt = source.get("load_zones");
    for (std::size_t r = 0; r < zt.size(); ++r) {
      const auto& z = zt.text(r, "zone");
      if (data.zone_index.contains(z)) fail(ErrorKind::Duplicate, "load zone " + z);
      data.zone_index[z] = data.zones.size();
      data.zones.push_back(z);
    }
    const std::size_t ntp = ts.timepoints().size();
    data.demand.assign(data.zones.size(), std::vector<double>(ntp, std::nan("")));
    auto dt = source.get("zone_demand");
    for (std::size_t r = 0; r < dt.size(); ++r) {
      const auto& z = dt.text(r, "zone");
      const auto& tp = dt.text(r, "timepoint");
      require_reference(data.has_zone(z), dt, r, "zone", z, "load_zones.csv");
      require_reference(ts.has_timepoint(tp), dt, r, "timepoint", tp, "timepoints.csv");
      double d = dt.real(r, "demand_mw");
      if (!(d >= 0) || !std::isfinite(d)) {
        fail(ErrorKind::InputError, "zone_demand.csv row " + std::to_string(r + 1) + ": demand must be finite and >= 0");
      }
      data.demand[data.zone_index[z]][ts.timepoint_index(tp)] = d;
    }
    for (std::size_t z = 0; z < data.zones.size(); ++z)
      for (std::size_t tp = 0; tp < ntp; ++tp)
        if (std::isnan(data.demand[z][tp])) {
          fail(ErrorKind::MissingInput, "zone_demand.csv has no row for (" + data.zones[z] + ", " + tp_id(ts, tp) + ")");
        }
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    if (model.registry().names(ComponentKind::Injection).empty()) {
      fail(ErrorKind::UnresolvedRegistryEntry, "energy balance has no registered injection components");
    }
    for (std::size_t z = 0; z < ctx.data.zones.size(); ++z) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{ctx.data.zones[z], tp_id(ts, tp)};
        auto net = registered_sum(model, ComponentKind::Injection, key) -
                   registered_sum(model, ComponentKind::Withdrawal, key);
        model.add_constraint("Energy_Balance", key, net, Sense::Equal, ctx.data.demand[z][tp]);
      }
    }
  }

  // Marginal price in $/MWh: the balance dual divided by the NPV weight of one MWh.
  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"zone_balance", {"zone", "timepoint", "demand_mw", "marginal_cost"}, {}};
    for (std::size_t z = 0; z < ctx.data.zones.size(); ++z) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{ctx.data.zones[z], tp_id(ts, tp)};
        std::string price = "";
        const auto row_name = indexed_name("Energy_Balance", key);
        if (model.find_constraint(row_name) && !sol.duals.empty() && ctx.data.financials) {
          const auto& period = ts.periods()[ts.period_of(tp)];
          double scale = period_discount_factor(*ctx.data.financials, period) * ts.weight(tp) / period.length_years;
          price = fmt_num(sol.duals[model.constraint_position(row_name)] / scale);
        }
        t.add({key[0], key[1], fmt_num(ctx.data.demand[z][tp]), price});
      }
    }
    out.push_back(std::move(t));
  }
};

// UnservedLoad[z,tp] >= 0 as an injection priced at `unserved_load_penalty` $/MWh.
class UnservedLoadModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kUnservedLoad, kDefineArguments | kDefineComponents | kPostSolve};
  }

  void define_arguments(Options& options) override {
    options.declare("unserved_load_penalty", "10000", "$/MWh charged on unserved load");
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    double penalty = ctx.options.real("unserved_load_penalty");
    if (penalty < 0) fail(ErrorKind::ConfigError, "unserved_load_penalty must be >= 0");
    if (penalty == 0) ctx.warnings.push_back("unserved_load_penalty is 0: the optimum may shed any amount of load");
    FamilyBuilder injection, cost;
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
      cost.touch({tp_id(ts, tp)});
      for (const auto& z : ctx.data.zones) {
        auto v = model.add_variable("UnservedLoad", {z, tp_id(ts, tp)});
        injection.add({z, tp_id(ts, tp)}, v, 1.0);
        if (penalty != 0) cost.add({tp_id(ts, tp)}, v, penalty);
      }
    }
    model.define_family("ZoneUnservedLoad", injection.build());
    model.define_family("UnservedLoadPenalty", cost.build());
    model.register_component(ComponentKind::Injection, "ZoneUnservedLoad");
    model.register_component(ComponentKind::CostPerTimepoint, "UnservedLoadPenalty");
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"unserved_load", {"zone", "timepoint", "unserved_mw"}, {}};
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp)
      for (const auto& z : ctx.data.zones)
        t.add({z, tp_id(ts, tp), fmt_num(sol.value(model.variable_id("UnservedLoad", {z, tp_id(ts, tp)})))});
    out.push_back(std::move(t));
  }
};

// Planning_Reserve[p]: sum_g credit_g * GenCapacity[g,p] >= (1 + margin) * system peak in p.
// Credit is capacity_credit when given, otherwise 1; variable projects must give it.
class PlanningReservesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kPlanningReserves, kDefineArguments | kDefineDynamicComponents};
  }

  void define_arguments(Options& options) override {
    options.declare("planning_reserve_margin", "0.15", "required capacity above system peak, as a fraction");
  }

  static double period_peak(const Dataset& data, std::size_t p) {
    double peak = 0.0;
    for (auto tp : data.ts().timepoints_in_period(p)) {
      double total = 0.0;
      for (std::size_t z = 0; z < data.zones.size(); ++z) total += data.demand[z][tp];
      peak = std::max(peak, total);
    }
    return peak;
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    double margin = ctx.options.real("planning_reserve_margin");
    if (margin < 0) fail(ErrorKind::ConfigError, "planning_reserve_margin must be >= 0");
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      ExpressionBuilder firm;
      for (const auto& g : ctx.data.projects) {
        if (!operable(ts, g, p)) continue;
        if (g.is_variable && !g.capacity_credit) {
          fail(ErrorKind::MissingInput, "variable project " + g.name + " needs capacity_credit in projects.csv");
        }
        firm.add(model.family_value("GenCapacity", {g.name, period_label(ts, p)}), g.capacity_credit.value_or(1.0));
      }
      model.add_constraint("Planning_Reserve", {period_label(ts, p)}, firm.build(), Sense::GreaterEqual,
                           (1.0 + margin) * period_peak(ctx.data, p));
    }
  }
};

// reserve_areas.csv: zone, area. Zones without a row fall in area "system".
class ReserveAreasModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kReserveAreas, kLoadInputs}; }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    if (!source.has("reserve_areas")) return;
    auto t = source.get("reserve_areas");
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& z = t.text(r, "zone");
      require_reference(ctx.data.has_zone(z), t, r, "zone", z, "load_zones.csv");
      ctx.data.reserve_area[z] = t.text(r, "area");
    }
  }
};

// Single-product upward spinning reserve.
//
// reserve_params.csv: area, load_fraction, vre_fraction, contingency_mw.
// Family: SpinningReserveRequirement[a,tp] =
//         load_fraction*area load + vre_fraction*area variable dispatch + contingency.
// Rows:   Spinning_Reserve[a,tp]: registered provisions - other requirements >= requirement.
class SpinningReservesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kSpinningReserves, kLoadInputs | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "reserve_params", name::kSpinningReserves);
    auto t = source.get("reserve_params");
    for (std::size_t r = 0; r < t.size(); ++r) {
      ReserveParams rp;
      rp.area = t.text(r, "area");
      rp.load_fraction = t.real_or(r, "load_fraction", 0.0);
      rp.vre_fraction = t.real_or(r, "vre_fraction", 0.0);
      rp.contingency_mw = t.real_or(r, "contingency_mw", 0.0);
      if (rp.load_fraction < 0 || rp.vre_fraction < 0 || rp.contingency_mw < 0) {
        fail(ErrorKind::InputError, "reserve_params.csv row " + std::to_string(r + 1) + ": negative coefficient");
      }
      if (rp.load_fraction == 0 && rp.vre_fraction == 0 && rp.contingency_mw == 0) {
        fail(ErrorKind::InputError, "reserve_params.csv row " + std::to_string(r + 1) + ": all coefficients are zero");
      }
      ctx.data.reserve_params[rp.area] = rp;
    }
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    if (!ctx.active(name::kCommitOperate) && !ctx.active(name::kStorage)) {
      fail(ErrorKind::ConfigError,
           "spinning reserves need a provider: generators.core.commit.operate or generators.extensions.storage");
    }
    for (const auto& a : ctx.data.areas()) {
      if (!ctx.data.reserve_params.contains(a)) {
        fail(ErrorKind::MissingInput, "reserve_params.csv has no row for area " + a);
      }
    }
    model.register_component(ComponentKind::ReserveRequirement, "SpinningReserveRequirement");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const auto& data = ctx.data;
    FamilyBuilder req;
    for (const auto& a : data.areas()) {
      const auto& rp = data.reserve_params.at(a);
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{a, tp_id(ts, tp)};
        double load = 0.0;
        for (std::size_t z = 0; z < data.zones.size(); ++z)
          if (data.area_of(data.zones[z]) == a) load += data.demand[z][tp];
        req.add_constant(key, rp.load_fraction * load + rp.contingency_mw);
        if (rp.vre_fraction == 0.0) continue;
        const std::size_t p = ts.period_of(tp);
        for (const auto& g : data.projects) {
          if (!g.is_variable || data.area_of(g.zone) != a || !operable(ts, g, p)) continue;
          req.add(key, model.variable_id("DispatchGen", {g.name, tp_id(ts, tp)}), rp.vre_fraction);
        }
      }
    }
    model.define_family("SpinningReserveRequirement", req.build());
    for (const auto& a : data.areas()) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{a, tp_id(ts, tp)};
        auto slack = registered_sum(model, ComponentKind::ReserveProvision, key) -
                     registered_sum(model, ComponentKind::ReserveRequirement, key);
        model.add_constraint("Spinning_Reserve", key, slack, Sense::GreaterEqual, 0.0);
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"spinning_reserves", {"area", "timepoint", "requirement_mw", "provided_mw"}, {}};
    for (const auto& a : ctx.data.areas()) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{a, tp_id(ts, tp)};
        t.add({a, key[1], fmt_num(sol.evaluate(registered_sum(model, ComponentKind::ReserveRequirement, key))),
               fmt_num(sol.evaluate(registered_sum(model, ComponentKind::ReserveProvision, key)))});
      }
    }
    out.push_back(std::move(t));
  }
};

// Energy-neutral load shifting.
//
// ShiftLoad = ShiftLoadUp - ShiftLoadDown, with
//   ShiftLoadDown <= shift_fraction * demand, ShiftLoadUp <= (cap_multiplier - 1) * demand.
// Rows:   DR_Energy_Neutral[z,ts]; DR_Reserve_Limit[z,tp] when dr_provide_reserves.
// Family: ZoneShiftLoad[z,tp] (withdrawal); DemandShiftTieBreak[tp] (1e-6 $/MWh on both
//         directions, selects zero shift among equal-cost plans);
//         DemandResponseReserve[a,tp] (reserve provision).
class DemandShiftModule : public Module {
 public:
  static constexpr double kTieBreakCost = 1e-6;

  ModuleDescriptor descriptor() const override {
    return {name::kDemandShift, kDefineArguments | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void define_arguments(Options& options) override {
    options.declare("dr_shift_fraction", "0.10", "share of demand that may be moved out of an hour");
    options.declare("dr_cap_multiplier", "1.80", "maximum shifted demand as a multiple of original demand");
    options.declare("dr_provide_reserves", "0", "shiftable demand may provide spinning reserve");
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    auto& params = ctx.data.demand_shift;
    params.shift_fraction = ctx.options.real("dr_shift_fraction");
    params.cap_multiplier = ctx.options.real("dr_cap_multiplier");
    if (params.shift_fraction < 0 || params.shift_fraction > 1 || params.cap_multiplier < 1) {
      fail(ErrorKind::ConfigError, "dr_shift_fraction must lie in [0,1] and dr_cap_multiplier must be >= 1");
    }
    const bool reserves = ctx.options.flag("dr_provide_reserves");
    if (reserves && !ctx.active(name::kSpinningReserves)) {
      fail(ErrorKind::ConfigError, "dr_provide_reserves needs " + std::string(name::kSpinningReserves));
    }
    FamilyBuilder shift, tiebreak, reserve;
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
      const auto& tpid = tp_id(ts, tp);
      tiebreak.touch({tpid});
      for (std::size_t z = 0; z < ctx.data.zones.size(); ++z) {
        const auto& zone = ctx.data.zones[z];
        double d = ctx.data.demand[z][tp];
        IndexKey key{zone, tpid};
        auto up = model.add_variable("ShiftLoadUp", key, 0.0, (params.cap_multiplier - 1.0) * d);
        auto down = model.add_variable("ShiftLoadDown", key, 0.0, params.shift_fraction * d);
        shift.add(key, up, 1.0);
        shift.add(key, down, -1.0);
        tiebreak.add({tpid}, up, kTieBreakCost);
        tiebreak.add({tpid}, down, kTieBreakCost);
        if (reserves) reserve.add({ctx.data.area_of(zone), tpid}, model.add_variable("DRReserve", key), 1.0);
      }
    }
    model.define_family("ZoneShiftLoad", shift.build());
    model.define_family("DemandShiftTieBreak", tiebreak.build());
    model.register_component(ComponentKind::Withdrawal, "ZoneShiftLoad");
    model.register_component(ComponentKind::CostPerTimepoint, "DemandShiftTieBreak");
    if (reserves) {
      for (const auto& a : ctx.data.areas())
        for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) reserve.touch({a, tp_id(ts, tp)});
      model.define_family("DemandResponseReserve", reserve.build());
      model.register_component(ComponentKind::ReserveProvision, "DemandResponseReserve");
    }
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const bool reserves = ctx.options.flag("dr_provide_reserves");
    for (std::size_t z = 0; z < ctx.data.zones.size(); ++z) {
      const auto& zone = ctx.data.zones[z];
      for (std::size_t s = 0; s < ts.series().size(); ++s) {
        ExpressionBuilder energy;
        for (auto tp : ts.timepoints_in_series(s)) {
          energy.add(model.family_value("ZoneShiftLoad", {zone, tp_id(ts, tp)}), ts.duration(tp));
        }
        model.add_constraint("DR_Energy_Neutral", {zone, ts.series()[s].id}, energy.build(), Sense::Equal, 0.0);
      }
      if (!reserves) continue;
      // Up-reserve is the room left to cut load down to its floor.
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        IndexKey key{zone, tp_id(ts, tp)};
        auto row = var_expr(model, "DRReserve", key) - model.family_value("ZoneShiftLoad", key);
        model.add_constraint("DR_Reserve_Limit", key, row, Sense::LessEqual,
                             ctx.data.demand_shift.shift_fraction * ctx.data.demand[z][tp]);
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"demand_shift", {"zone", "timepoint", "demand_mw", "shift_mw"}, {}};
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
      for (std::size_t z = 0; z < ctx.data.zones.size(); ++z) {
        IndexKey key{ctx.data.zones[z], tp_id(ts, tp)};
        t.add({key[0], key[1], fmt_num(ctx.data.demand[z][tp]),
               fmt_num(sol.evaluate(model.family_value("ZoneShiftLoad", key)))});
      }
    }
    out.push_back(std::move(t));
  }
};

}  // namespace gridopt::modules
