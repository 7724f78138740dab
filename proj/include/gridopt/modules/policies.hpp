#pragma once

#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// Reads `column` of a per-period table into `target`; a non-empty option
// value overrides every period.
inline void load_period_values(const io::TableSource& source, const std::string& table, const std::string& column,
                               const std::string& override_value, const TimescaleSet& ts,
                               std::map<std::string, double>& target) {
  if (source.has(table)) {
    auto t = source.get(table);
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& period = t.text(r, "period");
      require_reference(ts.has_period(period), t, r, "period", period, "periods.csv");
      if (!t.has_column(column)) continue;
      double v = t.real_or(r, column, std::nan(""));
      if (!std::isnan(v)) target[period] = v;
    }
  }
  if (!override_value.empty()) {
    auto v = io::parse_real(override_value);
    if (!v) fail(ErrorKind::ConfigError, "option value for " + column + " is not a number: " + override_value);
    for (const auto& p : ts.periods()) target[p.label] = *v;
  }
}

// rps_targets.csv: period, target.
// RPS_Target[p]: annual renewable generation >= target * annual demand.
// Renewable generation counts DispatchGen of non-storage projects whose
// sources are all renewable.
class RpsModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kRps, kDefineArguments | kLoadInputs | kDefineDynamicComponents | kPostSolve};
  }

  void define_arguments(Options& options) override {
    options.declare("rps_target", "", "renewable share applied to every period (overrides rps_targets.csv)");
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    const auto& override_value = ctx.options.text("rps_target");
    if (override_value.empty()) require_table(source, "rps_targets", name::kRps);
    auto& targets = ctx.data.policies.rps_target;
    load_period_values(source, "rps_targets", "target", override_value, ctx.ts(), targets);
    for (const auto& [p, v] : targets)
      if (!(v >= 0 && v <= 1)) fail(ErrorKind::InputError, "RPS target for " + p + " must lie in [0,1]");
  }

  static LinearExpression renewable_energy(const ModelGraph& model, const ModuleContext& ctx, std::size_t p) {
    const auto& ts = ctx.ts();
    const double years = ts.periods()[p].length_years;
    ExpressionBuilder out;
    for (const auto& g : ctx.data.projects) {
      if (g.is_storage() || !is_renewable(ctx.data, g) || !operable(ts, g, p)) continue;
      for (auto tp : ts.timepoints_in_period(p))
        out.add(model.variable_id("DispatchGen", {g.name, tp_id(ts, tp)}), ts.weight(tp) / years);
    }
    return out.build();
  }

  static double annual_demand(const Dataset& data, std::size_t p) {
    const auto& ts = data.ts();
    double total = 0.0;
    for (auto tp : ts.timepoints_in_period(p))
      for (std::size_t z = 0; z < data.zones.size(); ++z) total += data.demand[z][tp] * ts.weight(tp);
    return total / ts.periods()[p].length_years;
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      auto it = ctx.data.policies.rps_target.find(period_label(ts, p));
      if (it == ctx.data.policies.rps_target.end() || it->second == 0.0) continue;
      model.add_constraint("RPS_Target", {period_label(ts, p)}, renewable_energy(model, ctx, p), Sense::GreaterEqual,
                           it->second * annual_demand(ctx.data, p));
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"rps", {"period", "target", "renewable_mwh_per_yr", "demand_mwh_per_yr"}, {}};
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      auto it = ctx.data.policies.rps_target.find(period_label(ts, p));
      t.add({period_label(ts, p), fmt_num(it == ctx.data.policies.rps_target.end() ? 0.0 : it->second),
             fmt_num(sol.evaluate(renewable_energy(model, ctx, p))), fmt_num(annual_demand(ctx.data, p))});
    }
    out.push_back(std::move(t));
  }
};

// carbon_policies.csv: period, carbon_cap (tCO2/yr, blank or inf = none), carbon_tax ($/tCO2).
// Rows:   Carbon_Cap[p]: annual emissions <= cap.
// Family: CarbonTaxCosts[p] = tax * annual emissions.
// The reported cap price is -dual / discount factor, in $/tCO2.
class CarbonPoliciesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kCarbon,
            kDefineArguments | kLoadInputs | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void define_arguments(Options& options) override {
    options.declare("carbon_cap", "", "tCO2/yr cap applied to every period (overrides carbon_policies.csv)");
    options.declare("carbon_tax", "", "$/tCO2 tax applied to every period (overrides carbon_policies.csv)");
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    const auto& cap = ctx.options.text("carbon_cap");
    const auto& tax = ctx.options.text("carbon_tax");
    if (cap.empty() && tax.empty()) require_table(source, "carbon_policies", name::kCarbon);
    auto& pol = ctx.data.policies;
    load_period_values(source, "carbon_policies", "carbon_cap", cap, ctx.ts(), pol.carbon_cap);
    load_period_values(source, "carbon_policies", "carbon_tax", tax, ctx.ts(), pol.carbon_tax);
    for (const auto& [p, v] : pol.carbon_cap)
      if (v < 0) fail(ErrorKind::InputError, "carbon cap for " + p + " is negative");
    for (const auto& [p, v] : pol.carbon_tax)
      if (!(v >= 0) || !std::isfinite(v)) fail(ErrorKind::InputError, "carbon tax for " + p + " must be finite and >= 0");
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    if (!ctx.active(name::kSourceProperties)) {
      fail(ErrorKind::ConfigError, "policies.carbon_policies requires energy_sources.properties");
    }
    model.register_component(ComponentKind::CostPerPeriod, "CarbonTaxCosts");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    const auto& pol = ctx.data.policies;
    FamilyBuilder costs;
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      const auto& label = period_label(ts, p);
      costs.touch({label});
      auto emissions = annual_emissions(model, ctx, p);
      if (auto it = pol.carbon_tax.find(label); it != pol.carbon_tax.end() && it->second != 0.0) {
        costs.add({label}, emissions, it->second);
      }
      if (auto it = pol.carbon_cap.find(label); it != pol.carbon_cap.end() && std::isfinite(it->second)) {
        model.add_constraint("Carbon_Cap", {label}, emissions, Sense::LessEqual, it->second);
      }
    }
    model.define_family("CarbonTaxCosts", costs.build());
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    const auto& pol = ctx.data.policies;
    OutputTable t{"carbon", {"period", "emissions_t_per_yr", "cap_t_per_yr", "tax_per_t", "cap_price_per_t"}, {}};
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      const auto& label = period_label(ts, p);
      auto cap = pol.carbon_cap.find(label);
      auto tax = pol.carbon_tax.find(label);
      std::string price;
      const auto row = indexed_name("Carbon_Cap", {label});
      if (model.find_constraint(row) && !sol.duals.empty() && ctx.data.financials) {
        double df = period_discount_factor(*ctx.data.financials, ts.periods()[p]);
        price = fmt_num(-sol.duals[model.constraint_position(row)] / df);
      }
      t.add({label, fmt_num(sol.evaluate(annual_emissions(model, ctx, p))),
             cap == pol.carbon_cap.end() || !std::isfinite(cap->second) ? "inf" : fmt_num(cap->second),
             fmt_num(tax == pol.carbon_tax.end() ? 0.0 : tax->second), price});
    }
    out.push_back(std::move(t));
  }
};

}  // namespace gridopt::modules
