#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/common.hpp"

namespace gridopt::modules {

// transmission_lines.csv: line, zone_a, zone_b, existing_mw, efficiency, derate, life_years
// transmission_build_costs.csv: line, period, capital_cost ($/MW)
//
// Variables: BuildTx[l,v]. Families: TxCapacity[l,p] (existing + builds from
// earlier or equal periods, never retired); TxCapitalCosts[p].
class TxBuildModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kTxBuild, kLoadInputs | kDefineComponents | kPostSolve};
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    require_table(source, "transmission_lines", name::kTxBuild);
    auto& data = ctx.data;
    const auto& ts = ctx.ts();
    auto t = source.get("transmission_lines");
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::string> ids;
    for (std::size_t r = 0; r < t.size(); ++r) {
      TransmissionLine l;
      l.id = t.text(r, "line");
      l.zone_a = t.text(r, "zone_a");
      l.zone_b = t.text(r, "zone_b");
      l.existing_mw = t.real_or(r, "existing_mw", 0.0);
      l.efficiency = t.real_or(r, "efficiency", 1.0);
      l.derate = t.real_or(r, "derate", 0.0);
      l.life_years = static_cast<int>(t.real_or(r, "life_years", 40));
      for (const auto& z : {l.zone_a, l.zone_b}) {
        if (!data.has_zone(z)) {
          fail(ErrorKind::DanglingZone, "transmission_lines.csv row " + std::to_string(r + 1) + " line " + l.id +
                                            " references unknown zone '" + z + "' (load_zones.csv)");
        }
      }
      if (l.zone_a == l.zone_b) fail(ErrorKind::InputError, "line " + l.id + " connects zone " + l.zone_a + " to itself");
      if (!(l.efficiency > 0 && l.efficiency <= 1) || !(l.derate >= 0 && l.derate <= 1) || l.existing_mw < 0 ||
          l.life_years < 1) {
        fail(ErrorKind::InputError, "transmission_lines.csv row " + std::to_string(r + 1) + ": parameter out of range");
      }
      auto key = std::minmax(l.zone_a, l.zone_b);
      if (!pairs.insert({key.first, key.second}).second) {
        fail(ErrorKind::Duplicate, "more than one line between " + key.first + " and " + key.second);
      }
      if (!ids.insert(l.id).second) fail(ErrorKind::Duplicate, "line " + l.id);
      data.lines.push_back(std::move(l));
    }
    if (source.has("transmission_build_costs")) {
      auto c = source.get("transmission_build_costs");
      for (std::size_t r = 0; r < c.size(); ++r) {
        const auto& id = c.text(r, "line");
        const auto& period = c.text(r, "period");
        require_reference(ids.contains(id), c, r, "line", id, "transmission_lines.csv");
        require_reference(ts.has_period(period), c, r, "period", period, "periods.csv");
        for (auto& l : data.lines)
          if (l.id == id) l.capital_cost[period] = c.real(r, "capital_cost");
      }
    }
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    if (ctx.data.zones.size() < 2) fail(ErrorKind::ConfigError, "transmission needs at least two load zones");
    if (!ctx.data.financials) fail(ErrorKind::MissingInput, "transmission requires financials.csv (module financials)");
    const auto& fin = *ctx.data.financials;
    FamilyBuilder capacity, costs;
    for (std::size_t p = 0; p < ts.periods().size(); ++p) costs.touch({period_label(ts, p)});
    for (const auto& l : ctx.data.lines) {
      std::vector<std::pair<std::size_t, VarId>> builds;
      for (std::size_t v = 0; v < ts.periods().size(); ++v) {
        auto it = l.capital_cost.find(period_label(ts, v));
        if (it == l.capital_cost.end()) continue;
        builds.push_back({v, model.add_variable("BuildTx", {l.id, it->first})});
      }
      const double annuity = crf(fin.interest_rate, l.life_years);
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        IndexKey key{l.id, period_label(ts, p)};
        capacity.add_constant(key, l.existing_mw);
        for (const auto& [v, var] : builds) {
          if (v > p) continue;
          capacity.add(key, var, 1.0);
          costs.add({period_label(ts, p)}, var, l.capital_cost.at(period_label(ts, v)) * annuity);
        }
      }
    }
    model.define_family("TxCapacity", capacity.build());
    model.define_family("TxCapitalCosts", costs.build());
    model.register_component(ComponentKind::CostPerPeriod, "TxCapitalCosts");
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"transmission_builds", {"line", "period", "build_mw", "capacity_mw"}, {}};
    for (const auto& l : ctx.data.lines) {
      for (std::size_t p = 0; p < ts.periods().size(); ++p) {
        IndexKey key{l.id, period_label(ts, p)};
        auto v = model.find_variable(indexed_name("BuildTx", key));
        t.add({l.id, key[1], fmt_num(v.valid() ? sol.value(v) : 0.0),
               fmt_num(sol.evaluate(model.family_value("TxCapacity", key)))});
      }
    }
    out.push_back(std::move(t));
  }
};

// Lossy bidirectional transport. Direction "ab" sends from zone_a to zone_b.
//
// Variables: DispatchTx[l,dir,tp]. Rows: Tx_Limit[l,dir,tp].
// Families:  ZoneTxImport[z,tp] = efficiency * received (injection);
//            ZoneTxExport[z,tp] = sent (withdrawal).
class TxDispatchModule : public Module {
 public:
  ModuleDescriptor descriptor() const override {
    return {name::kTxDispatch, kDefineComponents | kDefineDynamicComponents | kPostSolve};
  }

  void define_components(ModelGraph& model, ModuleContext& ctx) override {
    if (!ctx.active(name::kTxBuild)) {
      fail(ErrorKind::ConfigError, "transmission.transport.dispatch requires transmission.transport.build");
    }
    const auto& ts = ctx.ts();
    FamilyBuilder imports, exports;
    for (const auto& z : ctx.data.zones)
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        imports.touch({z, tp_id(ts, tp)});
        exports.touch({z, tp_id(ts, tp)});
      }
    for (const auto& l : ctx.data.lines) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        const auto& tpid = tp_id(ts, tp);
        for (const auto& [dir, from, to] : directions(l)) {
          auto v = model.add_variable("DispatchTx", {l.id, dir, tpid});
          exports.add({from, tpid}, v, 1.0);
          imports.add({to, tpid}, v, l.efficiency);
        }
      }
    }
    model.define_family("ZoneTxImport", imports.build());
    model.define_family("ZoneTxExport", exports.build());
    model.register_component(ComponentKind::Injection, "ZoneTxImport");
    model.register_component(ComponentKind::Withdrawal, "ZoneTxExport");
  }

  void define_dynamic_components(ModelGraph& model, ModuleContext& ctx) override {
    const auto& ts = ctx.ts();
    for (const auto& l : ctx.data.lines) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        const auto& tpid = tp_id(ts, tp);
        auto cap = model.family_value("TxCapacity", {l.id, period_label(ts, ts.period_of(tp))});
        for (const auto& d : directions(l)) {
          const auto& dir = std::get<0>(d);
          model.add_constraint("Tx_Limit", {l.id, dir, tpid},
                               var_expr(model, "DispatchTx", {l.id, dir, tpid}) - cap.scaled(1.0 - l.derate),
                               Sense::LessEqual, 0.0);
        }
      }
    }
  }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    const auto& ts = ctx.ts();
    OutputTable t{"transmission_flows", {"line", "from_zone", "to_zone", "timepoint", "sent_mw", "delivered_mw"}, {}};
    for (const auto& l : ctx.data.lines) {
      for (std::size_t tp = 0; tp < ts.timepoints().size(); ++tp) {
        for (const auto& [dir, from, to] : directions(l)) {
          double sent = sol.value(model.variable_id("DispatchTx", {l.id, dir, tp_id(ts, tp)}));
          t.add({l.id, from, to, tp_id(ts, tp), fmt_num(sent), fmt_num(sent * l.efficiency)});
        }
      }
    }
    out.push_back(std::move(t));
  }

 private:
  static std::vector<std::tuple<std::string, std::string, std::string>> directions(const TransmissionLine& l) {
    return {{"ab", l.zone_a, l.zone_b}, {"ba", l.zone_b, l.zone_a}};
  }
};

}  // namespace gridopt::modules
