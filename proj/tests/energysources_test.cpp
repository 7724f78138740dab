#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace gridopt;
using toy::Project;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InputError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const std::vector<std::string> kSimple = {"timescales",
                                          "financials",
                                          "balancing.load_zones",
                                          "energy_sources.properties",
                                          "energy_sources.fuel_costs.simple",
                                          "generators.core.build",
                                          "generators.core.dispatch",
                                          "generators.core.no_commit"};

const std::vector<std::string> kMarkets = {"timescales",
                                           "financials",
                                           "balancing.load_zones",
                                           "energy_sources.properties",
                                           "energy_sources.fuel_costs.markets",
                                           "generators.core.build",
                                           "generators.core.dispatch",
                                           "generators.core.no_commit"};

const std::vector<std::string> kBoth = {"timescales",
                                        "financials",
                                        "balancing.load_zones",
                                        "energy_sources.properties",
                                        "energy_sources.fuel_costs.simple",
                                        "energy_sources.fuel_costs.markets",
                                        "generators.core.build",
                                        "generators.core.dispatch",
                                        "generators.core.no_commit"};

// One thermal plant at 10 MMBtu/MWh serving a flat load for a single
// timepoint of `hours`.
io::MemorySource thermal(double load_mw, double hours, const std::string& fuels = "gas") {
  io::MemorySource src;
  toy::timescales(src, 1, hours);
  toy::financials(src);
  toy::demand(src, {"z"}, {load_mw});
  toy::projects(src, {Project{.name = "plant", .sources = fuels}});
  toy::existing(src, {{"plant", 1000}});
  src.set("heat_rate_segments", "project,segment,intercept,slope\nplant,0,0,10\n");
  src.set("energy_sources", "energy_source,is_fuel,co2_intensity\ngas,1,0.053\na,1,0\nb,1,0\n");
  return src;
}

void two_tiers(io::MemorySource& src) {
  src.set("zone_fuel_markets", "zone,fuel,market\nz,gas,m\n");
  src.set("fuel_supply_tiers", "market,period,tier,price,limit\nm,2020,1,2,100\nm,2020,2,3,inf\n");
}

}  // namespace

TEST(FuelCostsSimple, PriceTimesFuelTimesHours) {
  // 1 MW for 100 h at 10 MMBtu/MWh and $3/MMBtu
  auto src = thermal(1, 100);
  src.set("fuel_costs", "zone,fuel,period,price\nz,gas,2020,3\n");
  auto r = toy::solve(kSimple, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("FuelUse", {"plant", "t0", "gas"}), 10.0, 1e-9);
  EXPECT_NEAR(r.family("FuelCostsSimple", {"t0"}), 30.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, 3000.0, 1e-6);
  EXPECT_LT(toy::reconciliation_error(r), 1e-9);
}

TEST(FuelCostsSimple, FreeFuelCostsNothing) {
  auto src = thermal(1, 100);
  src.set("fuel_costs", "zone,fuel,period,price\nz,gas,2020,0\n");
  auto r = toy::solve(kSimple, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.sol.objective, 0.0, 1e-9);
}

TEST(FuelCostsSimple, MissingPriceNamesTheKey) {
  auto src = thermal(1, 100);
  src.set("fuel_costs", "zone,fuel,period,price\n");
  EXPECT_EQ(kind_of([&] { (void)build_model(kSimple, src); }), ErrorKind::MissingInput);
  const auto msg = message_of([&] { (void)build_model(kSimple, src); });
  EXPECT_NE(msg.find("(z, gas, 2020)"), std::string::npos) << msg;
}

TEST(FuelMarkets, SecondTierPricesTheExcess) {
  // 12 MW for 1 h at 10 MMBtu/MWh: 120 MMBtu/yr = 100 x $2 + 20 x $3 = $260
  auto src = thermal(12, 1);
  two_tiers(src);
  auto r = toy::solve(kMarkets, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("ConsumeTier", {"m", "2020", "1"}), 100.0, 1e-9);
  EXPECT_NEAR(r.value("ConsumeTier", {"m", "2020", "2"}), 20.0, 1e-9);
  EXPECT_NEAR(r.family("FuelMarketCosts", {"2020"}), 260.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, 100.0 * 2 + 20.0 * 3, 1e-6);
  EXPECT_LT(toy::reconciliation_error(r), 1e-9);
}

TEST(FuelMarkets, BelowFirstLimitUsesOnlyFirstTier) {
  auto src = thermal(8, 1);
  two_tiers(src);
  auto r = toy::solve(kMarkets, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("ConsumeTier", {"m", "2020", "1"}), 80.0, 1e-9);
  EXPECT_NEAR(r.value("ConsumeTier", {"m", "2020", "2"}), 0.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, 160.0, 1e-6);
}

TEST(FuelMarkets, AnnualCostScalesWithPeriodDiscountFactor) {
  // 120 MMBtu over a 5-year period is 24 MMBtu/yr at $2; five undiscounted years
  io::MemorySource src = thermal(12, 1);
  toy::timescales(src, 1, 1.0, 1.0, true, 5);
  two_tiers(src);
  auto r = toy::solve(kMarkets, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.family("FuelMarketCosts", {"2020"}), 48.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, 48.0 * 5, 1e-6);
  EXPECT_LT(toy::reconciliation_error(r), 1e-9);
}

TEST(FuelMarkets, DecreasingTierPricesRejected) {
  auto src = thermal(12, 1);
  src.set("zone_fuel_markets", "zone,fuel,market\nz,gas,m\n");
  src.set("fuel_supply_tiers", "market,period,tier,price,limit\nm,2020,1,3,100\nm,2020,2,2,inf\n");
  EXPECT_EQ(kind_of([&] { (void)build_model(kMarkets, src); }), ErrorKind::InputError);
}

TEST(FuelMarkets, DualFuelExhaustsCheapCappedFuelFirst) {
  // fuel a: $1 but capped at 50 MMBtu/yr; fuel b: $5 unlimited
  auto src = thermal(12, 1, "a;b");
  src.set("zone_fuel_markets", "zone,fuel,market\nz,a,ma\n");
  src.set("fuel_supply_tiers", "market,period,tier,price,limit\nma,2020,1,1,50\n");
  src.set("fuel_costs", "zone,fuel,period,price\nz,b,2020,5\n");
  auto r = toy::solve(kBoth, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("FuelUse", {"plant", "t0", "a"}), 50.0, 1e-9);
  EXPECT_NEAR(r.value("FuelUse", {"plant", "t0", "b"}), 70.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, 50.0 * 1 + 70.0 * 5, 1e-6);
}

TEST(FuelMarkets, PricedTwiceIsConfigError) {
  auto src = thermal(12, 1);
  two_tiers(src);
  src.set("fuel_costs", "zone,fuel,period,price\nz,gas,2020,3\n");
  EXPECT_EQ(kind_of([&] { (void)build_model(kBoth, src); }), ErrorKind::ConfigError);
}
