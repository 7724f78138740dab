#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gridopt/financials.hpp"
#include "gridopt/timescales.hpp"

namespace gridopt {

struct HeatRateSegment {
  double intercept = 0.0;  // MMBtu/h per committed MW
  double slope = 0.0;      // MMBtu/MWh
};

struct StorageParams {
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  std::optional<double> max_cycles_per_year;
  bool can_provide_reserves = true;
  std::map<std::string, double> energy_capital_cost;  // vintage period -> $/MWh
  double predetermined_energy_mwh = 0.0;

  double round_trip() const { return charge_efficiency * discharge_efficiency; }
};

// One technology stack in one zone.
struct GenerationProject {
  std::string name;
  std::string zone;
  int max_age_years = 30;
  double fixed_om = 0.0;     // $/MW-yr
  double variable_om = 0.0;  // $/MWh
  std::vector<std::string> energy_sources;
  bool is_variable = false;
  double outage_derate = 0.0;
  double unit_size_mw = 0.0;  // 0: continuous sizing
  double min_load_fraction = 0.0;
  double startup_cost = 0.0;  // $/MW started
  double startup_fuel = 0.0;  // MMBtu/MW started
  double min_uptime_h = 0.0;
  double min_downtime_h = 0.0;
  bool commit = true;
  std::optional<double> capacity_credit;
  bool is_hydro_simple = false;

  std::map<std::string, double> capital_cost;  // buildable vintage period -> $/MW
  std::map<int, double> predetermined;         // build year -> MW
  std::vector<HeatRateSegment> heat_rate;      // sorted by slope
  std::vector<double> capacity_factor;         // per timepoint; NaN when absent
  std::map<std::string, double> hydro_avg_flow;  // timeseries -> MW
  std::optional<StorageParams> storage;

  bool is_storage() const { return storage.has_value(); }
};

struct TransmissionLine {
  std::string id;
  std::string zone_a;
  std::string zone_b;
  double existing_mw = 0.0;
  double efficiency = 1.0;
  double derate = 0.0;
  int life_years = 40;
  std::map<std::string, double> capital_cost;  // vintage period -> $/MW
};

struct EnergySource {
  std::string name;
  bool is_fuel = false;
  double co2_intensity = 0.0;  // tCO2/MMBtu
  bool renewable = false;
};

struct SupplyTier {
  std::string market;
  std::string period;
  int tier = 0;
  double price = 0.0;                                      // $/MMBtu
  double limit = std::numeric_limits<double>::infinity();  // MMBtu per year
};

struct ReserveParams {
  std::string area;
  double load_fraction = 0.0;
  double vre_fraction = 0.0;
  double contingency_mw = 0.0;
};

struct DemandShiftParams {
  double shift_fraction = 0.10;
  double cap_multiplier = 1.80;
};

struct PolicyParams {
  std::map<std::string, double> rps_target;   // period -> fraction
  std::map<std::string, double> carbon_cap;   // period -> tCO2/yr (inf allowed)
  std::map<std::string, double> carbon_tax;   // period -> $/tCO2
};

// Typed inputs shared by all modules. Each module fills its part during
// load_inputs; builders only read it.
struct Dataset {
  std::optional<TimescaleSet> timescales;
  std::optional<FinancialParams> financials;

  std::vector<std::string> zones;
  std::map<std::string, std::size_t> zone_index;
  std::vector<std::vector<double>> demand;  // [zone][timepoint] MW

  std::map<std::string, std::string> reserve_area;  // zone -> area
  std::map<std::string, ReserveParams> reserve_params;
  DemandShiftParams demand_shift;

  std::map<std::string, EnergySource> sources;
  std::map<std::tuple<std::string, std::string, std::string>, double> fuel_price;  // (zone, fuel, period)
  std::map<std::pair<std::string, std::string>, std::string> fuel_market;        // (zone, fuel) -> market
  std::vector<SupplyTier> supply_tiers;

  std::vector<GenerationProject> projects;
  std::map<std::string, std::size_t> project_index;

  std::vector<TransmissionLine> lines;

  PolicyParams policies;

  const TimescaleSet& ts() const { return *timescales; }

  bool has_zone(const std::string& z) const { return zone_index.contains(z); }

  const GenerationProject& project(const std::string& name) const { return projects.at(project_index.at(name)); }

  const std::string& area_of(const std::string& zone) const {
    static const std::string system = "system";
    auto it = reserve_area.find(zone);
    return it == reserve_area.end() ? system : it->second;
  }

  std::vector<std::string> areas() const {
    std::set<std::string> out;
    for (const auto& z : zones) out.insert(area_of(z));
    return {out.begin(), out.end()};
  }

  double zone_demand(std::size_t zone, std::size_t tp) const { return demand.at(zone).at(tp); }
};

}  // namespace gridopt
