#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// energy_sources.csv: energy_source, is_fuel, co2_intensity, renewable.
// Writes emissions.csv after the solve.
class SourcePropertiesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kSourceProperties, kLoadInputs | kPostSolve}; }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "energy_sources", name::kSourceProperties);
    auto t = source.get("energy_sources");
    for (std::size_t r = 0; r < t.size(); ++r) {
      EnergySource s;
      s.name = t.text(r, "energy_source");
      s.is_fuel = t.flag_or(r, "is_fuel", false);
      s.co2_intensity = t.real_or(r, "co2_intensity", 0.0);
      s.renewable = t.flag_or(r, "renewable", false);
      if (!(s.co2_intensity >= 0) || !std::isfinite(s.co2_intensity)) {
        fail(ErrorKind::InputError, "energy_sources.csv row " + std::to_string(r + 1) + ": bad co2_intensity");
      }
      if (ctx.data.sources.contains(s.name)) fail(ErrorKind::Duplicate, "energy source " + s.name);
      ctx.data.sources[s.name] = s;
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"emissions", {"period", "fuel_mmbtu_per_yr", "co2_t_per_yr"}, {}};
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      double fuel = 0.0;
      const double years = ts.periods()[p].length_years;
      for_each_fuel_use(model, ctx, p, [&](const GenerationProject&, std::size_t tp, const std::string&, VarId v) {
        fuel += sol.value(v) * ts.weight(tp) / years;
      });
      t.add({period_label(ts, p), fmt_num(fuel), fmt_num(sol.evaluate(annual_emissions(model, ctx, p)))});
    }
    out.push_back(std::move(t));
  }
};

inline bool market_priced(const ModuleContext& ctx, const std::string& zone, const std::string& fuel) {
  return ctx.active(name::kFuelMarkets) && ctx.data.fuel_market.contains({zone, fuel});
}

// Flat fuel prices per (zone, fuel, period) from fuel_costs.csv.
// Family FuelCostsSimple[tp] in $/h.
class FuelCostsSimpleModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kFuelCostsSimple, kLoadInputs | kDefineComponents | kDefineDynamicComponents};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "fuel_costs", name::kFuelCostsSimple);
    auto t = source.get("fuel_costs");
    const auto& ts = ctx.ts();
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto& zone = t.text(r, "zone");
      const auto& fuel = t.text(r, "fuel");
      const auto& period = t.text(r, "period");
      require_reference(ts.has_period(period), t, r, "period", period, "periods.csv");
      require_reference(ctx.data.sources.contains(fuel), t, r, "fuel", fuel, "energy_sources.csv");
      ctx.data.fuel_price[{zone, fuel, period}] = t.real(r, "price");
    }
  }

  void define_components(ModelGraph& model, ModuleContext&) override {
    model.register_component(ComponentKind::CostPerTimepoint, "FuelCostsSimple");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    FamilyBuilder costs;
    for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) costs.touch({tp_id(ts, tp)});
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      const auto& label = period_label(ts, p);
      for_each_fuel_use(model, ctx, p, [&](const GenerationProject& g, std::size_t tp, const std::string& f, VarId v) {
        if (market_priced(ctx, g.zone, f)) return;
        auto it = ctx.data.fuel_price.find({g.zone, f, label});
        if (it == ctx.data.fuel_price.end()) {
          fail(ErrorKind::MissingInput, "fuel_costs.csv has no price for (" + g.zone + ", " + f + ", " + label + ")");
        }
        if (it->second != 0.0) costs.add({tp_id(ts, tp)}, v, it->second);
      });
    }
    model.define_family("FuelCostsSimple", costs.build());
  }
};

// Regional fuel markets with tiered annual supply curves.
//
// zone_fuel_markets.csv: zone, fuel, market
// fuel_supply_tiers.csv: market, period, tier, price, limit (blank or inf = unlimited)
// Variables: ConsumeTier[m,p,t] in [0, limit] (MMBtu/yr).
// Rows:      Fuel_Market_Balance[m,p]: sum_t ConsumeTier >= annual fuel use.
// Family:    FuelMarketCosts[p] (annual $).
class FuelMarketsModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kFuelMarkets, kLoadInputs | kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "zone_fuel_markets", name::kFuelMarkets);
    require_table(source, "fuel_supply_tiers", name::kFuelMarkets);
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    auto zm = source.get("zone_fuel_markets");
    for (std::size_t r = 0; r < zm.size(); ++r) {
      const auto& zone = zm.text(r, "zone");
      const auto& fuel = zm.text(r, "fuel");
      require_reference(data.sources.contains(fuel), zm, r, "fuel", fuel, "energy_sources.csv");
      if (!data.fuel_market.emplace(std::pair{zone, fuel}, zm.text(r, "market")).second) {
        fail(ErrorKind::Duplicate, "zone_fuel_markets.csv maps (" + zone + ", " + fuel + ") twice");
      }
    }
    auto st = source.get("fuel_supply_tiers");
    for (std::size_t r = 0; r < st.size(); ++r) {
      SupplyTier tier;
      tier.market = st.text(r, "market");
      tier.period = st.text(r, "period");
      tier.tier = static_cast<int>(st.integer(r, "tier"));
      tier.price = st.real(r, "price");
      tier.limit = st.real_or(r, "limit", kInf);
      require_reference(ts.has_period(tier.period), st, r, "period", tier.period, "periods.csv");
      if (!(tier.limit >= 0)) fail(ErrorKind::InputError, "fuel_supply_tiers.csv row " + std::to_string(r + 1) + ": negative limit");
      data.supply_tiers.push_back(tier);
    }
    std::stable_sort(data.supply_tiers.begin(), data.supply_tiers.end(), [](const SupplyTier& a, const SupplyTier& b) {
      return std::tie(a.market, a.period, a.tier) < std::tie(b.market, b.period, b.tier);
    });
    for (std::size_t i = 1; i < data.supply_tiers.size(); ++i) {
      const auto& a = data.supply_tiers[i - 1];
      const auto& b = data.supply_tiers[i];
      if (a.market != b.market || a.period != b.period) continue;
      if (a.tier == b.tier) fail(ErrorKind::Duplicate, "tier " + std::to_string(a.tier) + " of market " + a.market);
      if (b.price < a.price) {
        fail(ErrorKind::InputError, "supply tiers of market " + a.market + " in period " + a.period +
                                        " have decreasing prices (tier " + std::to_string(b.tier) + ")");
      }
    }
    for (const auto& [key, market] : data.fuel_market) {
      if (data.fuel_price.contains({key.first, key.second, ts.periods().front().label}) &&
          ctx.active(name::kFuelCostsSimple)) {
        fail(ErrorKind::ConfigError,
             "fuel " + key.second + " in zone " + key.first + " is priced both by fuel_costs.csv and market " + market);
      }
    }
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    FamilyBuilder costs;
    for (std::size_t p = 0; p < ts.periods().size(); ++p) costs.touch({period_label(ts, p)});
    for (const auto& tier : ctx.data.supply_tiers) {
      auto v = model.add_variable("ConsumeTier", {tier.market, tier.period, std::to_string(tier.tier)}, 0.0, tier.limit);
      if (tier.price != 0.0) costs.add({tier.period}, v, tier.price);
    }
    model.define_family("FuelMarketCosts", costs.build());
    model.register_component(ComponentKind::CostPerPeriod, "FuelMarketCosts");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (std::size_t p = 0; p < ts.periods().size(); ++p) {
      const auto& label = period_label(ts, p);
      const double years = ts.periods()[p].length_years;
      std::map<std::string, ExpressionBuilder> rows;
      for_each_fuel_use(model, ctx, p, [&](const GenerationProject& g, std::size_t tp, const std::string& f, VarId v) {
        auto it = ctx.data.fuel_market.find({g.zone, f});
        if (it == ctx.data.fuel_market.end()) return;
        rows[it->second].add(v, -ts.weight(tp) / years);
      });
      for (auto& [market, row] : rows) {
        bool any = false;
        for (const auto& tier : ctx.data.supply_tiers) {
          if (tier.market != market || tier.period != label) continue;
          row.add(model.variable_id("ConsumeTier", {market, label, std::to_string(tier.tier)}), 1.0);
          any = true;
        }
        if (!any) {
          fail(ErrorKind::MissingInput, "fuel_supply_tiers.csv has no tier for market " + market + " in " + label);
        }
        model.add_constraint("Fuel_Market_Balance", {market, label}, row.build(), Sense::GreaterEqual, 0.0);
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    OutputTable t{"fuel_market_tiers", {"market", "period", "tier", "price", "consumption_mmbtu_per_yr"}, {}};
    for (const auto& tier : ctx.data.supply_tiers) {
      auto v = model.variable_id("ConsumeTier", {tier.market, tier.period, std::to_string(tier.tier)});
      t.add({tier.market, tier.period, std::to_string(tier.tier), fmt_num(tier.price), fmt_num(sol.value(v))});
    }
    out.push_back(std::move(t));
  }
};

}  // namespace gridopt::modules
