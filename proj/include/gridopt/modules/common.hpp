#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/dataset.hpp"

// Names and helpers shared by several built-in modules.
namespace gridopt::modules {

namespace name {
inline constexpr const char* kTimescales = "timescales";
inline constexpr const char* kFinancials = "financials";
inline constexpr const char* kLoadZones = "balancing.load_zones";
inline constexpr const char* kUnservedLoad = "balancing.unserved_load";
inline constexpr const char* kPlanningReserves = "balancing.planning_reserves";
inline constexpr const char* kReserveAreas = "balancing.operating_reserves.areas";
inline constexpr const char* kSpinningReserves = "balancing.operating_reserves.spinning_reserves_advanced";
inline constexpr const char* kDemandShift = "balancing.demand_response.simple";
inline constexpr const char* kSourceProperties = "energy_sources.properties";
inline constexpr const char* kFuelCostsSimple = "energy_sources.fuel_costs.simple";
inline constexpr const char* kFuelMarkets = "energy_sources.fuel_costs.markets";
inline constexpr const char* kGenBuild = "generators.core.build";
inline constexpr const char* kGenDispatch = "generators.core.dispatch";
inline constexpr const char* kNoCommit = "generators.core.no_commit";
inline constexpr const char* kDiscreteBuild = "generators.core.proj_discrete_build";
inline constexpr const char* kCommitOperate = "generators.core.commit.operate";
inline constexpr const char* kCommitFuelUse = "generators.core.commit.fuel_use";
inline constexpr const char* kCommitDiscrete = "generators.core.commit.discrete";
inline constexpr const char* kStorage = "generators.extensions.storage";
inline constexpr const char* kHydroSimple = "generators.extensions.hydro_simple";
inline constexpr const char* kTxBuild = "transmission.transport.build";
inline constexpr const char* kTxDispatch = "transmission.transport.dispatch";
inline constexpr const char* kRps = "policies.rps_simple";
inline constexpr const char* kCarbon = "policies.carbon_policies";
inline constexpr const char* kReporting = "reporting";
}  // namespace name

inline const std::string& tp_id(const TimescaleSet& ts, std::size_t tp) { return ts.timepoints()[tp].id; }
inline const std::string& period_label(const TimescaleSet& ts, std::size_t p) { return ts.periods()[p].label; }

inline void require_table(const io::TableSource& source, const std::string& table, const std::string& module) {
  if (!source.has(table)) {
    fail(ErrorKind::MissingInput, "module " + module + " requires " + source.describe(table));
  }
}

inline std::vector<std::string> split_list(const std::string& text, char sep = ';') {
  std::vector<std::string> out;
  for (auto& f : io::split_fields(text, sep)) {
    if (!f.empty()) out.push_back(f);
  }
  return out;
}

// Row-level foreign-key check with both sides named in the message.
inline void require_reference(bool ok, const io::Table& table, std::size_t row, const std::string& column,
                              const std::string& value, const std::string& target) {
  if (!ok) {
    fail(ErrorKind::IntegrityError, table.name() + " row " + std::to_string(row + 1) + " " + column + " '" + value +
                                        "' has no matching row in " + target);
  }
}

inline bool source_is_fuel(const Dataset& data, const std::string& source) {
  auto it = data.sources.find(source);
  return it != data.sources.end() && it->second.is_fuel;
}

inline std::vector<std::string> project_fuels(const Dataset& data, const GenerationProject& g) {
  std::vector<std::string> out;
  for (const auto& s : g.energy_sources)
    if (source_is_fuel(data, s)) out.push_back(s);
  return out;
}

inline bool is_fueled(const Dataset& data, const GenerationProject& g) { return !project_fuels(data, g).empty(); }

inline bool is_renewable(const Dataset& data, const GenerationProject& g) {
  if (g.energy_sources.empty()) return false;
  for (const auto& s : g.energy_sources) {
    auto it = data.sources.find(s);
    if (it == data.sources.end() || !it->second.renewable) return false;
  }
  return true;
}

// A vintage built in `build_year` is in service in a period starting in
// `period_start` when build_year <= period_start <= build_year + max_age.
inline bool vintage_active(int build_year, int max_age, int period_start) {
  return build_year <= period_start && period_start <= build_year + max_age;
}

// Installed MW of a project in a period given builds by year.
inline double available_capacity(const GenerationProject& g, const Period& p, const std::map<int, double>& builds) {
  double total = 0.0;
  for (const auto& [year, mw] : builds) {
    if (vintage_active(year, g.max_age_years, p.start_year)) total += mw;
  }
  return total;
}

// Whether a project can have any capacity in period p.
inline bool operable(const TimescaleSet& ts, const GenerationProject& g, std::size_t p) {
  const auto& period = ts.periods()[p];
  for (const auto& [year, mw] : g.predetermined) {
    if (mw > 0 && vintage_active(year, g.max_age_years, period.start_year)) return true;
  }
  for (const auto& [v, cost] : g.capital_cost) {
    if (vintage_active(ts.periods()[ts.period_index(v)].start_year, g.max_age_years, period.start_year)) return true;
  }
  return false;
}

// Timepoints in periods where the project is operable, in timescale order.
inline std::vector<std::size_t> project_timepoints(const TimescaleSet& ts, const GenerationProject& g) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < ts.periods().size(); ++p) {
    if (!operable(ts, g, p)) continue;
    for (auto tp : ts.timepoints_in_period(p)) out.push_back(tp);
  }
  return out;
}

inline bool dispatchable(const GenerationProject& g) { return !g.is_variable && !g.is_storage(); }

// Committed projects are opted in, dispatchable, and the commitment module is active.
inline bool committed(const ModuleContext& ctx, const GenerationProject& g) {
  return ctx.active(name::kCommitOperate) && g.commit && dispatchable(g);
}

inline LinearExpression var_expr(const ModelGraph& model, std::string_view component, const IndexKey& index) {
  return LinearExpression(model.variable_id(component, index));
}

inline void add_to(ExpressionFamily& family, const IndexKey& key, const LinearExpression& e, double k = 1.0) {
  auto it = family.find(key);
  if (it == family.end()) family.emplace(key, e.scaled(k));
  else it->second = it->second + e.scaled(k);
}

// Accumulates expression families entry by entry without quadratic copying.
class FamilyBuilder {
 public:
  void add(const IndexKey& key, const LinearExpression& e, double k = 1.0) { builders_[key].add(e, k); }
  void add(const IndexKey& key, VarId v, double k) { builders_[key].add(v, k); }
  void add_constant(const IndexKey& key, double c) { builders_[key].add_constant(c); }
  void touch(const IndexKey& key) { builders_[key]; }

  ExpressionFamily build() const {
    ExpressionFamily out;
    for (const auto& [k, b] : builders_) out.emplace(k, b.build());
    return out;
  }

 private:
  std::map<IndexKey, ExpressionBuilder> builders_;
};

// Fuel use of every FuelUse[g,tp,f] variable in period p, visited in a fixed order.
template <typename Visit>
void for_each_fuel_use(const ModelGraph& model, const ModuleContext& ctx, std::size_t p, Visit&& visit) {
  const auto& ts = ctx.ts();
  for (const auto& g : ctx.data.projects) {
    if (!operable(ts, g, p)) continue;
    const auto fuels = project_fuels(ctx.data, g);
    for (auto tp : ts.timepoints_in_period(p))
      for (const auto& f : fuels) visit(g, tp, f, model.variable_id("FuelUse", {g.name, tp_id(ts, tp), f}));
  }
}

// Annual CO2 emissions (t/yr) in period p.
inline LinearExpression annual_emissions(const ModelGraph& model, const ModuleContext& ctx, std::size_t p) {
  const auto& ts = ctx.ts();
  const double years = ts.periods()[p].length_years;
  ExpressionBuilder out;
  for_each_fuel_use(model, ctx, p, [&](const GenerationProject&, std::size_t tp, const std::string& f, VarId v) {
    double intensity = ctx.data.sources.at(f).co2_intensity;
    if (intensity != 0.0) out.add(v, intensity * ts.weight(tp) / years);
  });
  return out.build();
}

}  // namespace gridopt::modules
