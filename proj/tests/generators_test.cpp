#include <gtest/gtest.h>

#include <random>

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

double capacity_at(int max_age, const std::map<int, double>& builds, int year) {
  GenerationProject g;
  g.max_age_years = max_age;
  return modules::available_capacity(g, Period{std::to_string(year), year, 1}, builds);
}

}  // namespace

TEST(AvailableCapacity, SingleVintageInService) { EXPECT_DOUBLE_EQ(capacity_at(30, {{2020, 100}}, 2045), 100.0); }

TEST(AvailableCapacity, VintagesRetireAfterMaxAge) {
  EXPECT_DOUBLE_EQ(capacity_at(25, {{2020, 100}, {2040, 50}}, 2045), 150.0);
  EXPECT_DOUBLE_EQ(capacity_at(25, {{2020, 100}, {2040, 50}}, 2046), 50.0);
}

TEST(AvailableCapacity, NoBuilds) { EXPECT_DOUBLE_EQ(capacity_at(30, {}, 2045), 0.0); }

TEST(Dispatch, VariableOutputCappedByCapacityFactor) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {100});
  toy::projects(src, {Project{.name = "wind", .sources = "wind", .variable = true}});
  toy::existing(src, {{"wind", 80}});
  toy::capacity_factors(src, "wind", {0.5});
  auto r = toy::solve(toy::with(toy::kDispatchModules, {"balancing.unserved_load"}), src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("DispatchGen", {"wind", "t0"}), 40.0, 1e-9);
  EXPECT_NEAR(r.value("UnservedLoad", {"z", "t0"}), 60.0, 1e-9);
}

TEST(Dispatch, FreeWindThenGasMatchesVertexEnumeration) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {100});
  toy::projects(src, {Project{.name = "wind", .sources = "wind", .variable = true},
                      Project{.name = "gas", .variable_om = 50}});
  toy::existing(src, {{"wind", 80}, {"gas", 200}});
  toy::capacity_factors(src, "wind", {0.5});
  auto r = toy::solve(toy::kDispatchModules, src);
  ASSERT_TRUE(r.sol.optimal());
  auto vertex = oracle::vertex_enumeration_min(solver::to_standard_form(r.run->model));
  ASSERT_TRUE(vertex.has_value());
  EXPECT_NEAR(r.sol.objective, *vertex, 1e-9);
  EXPECT_NEAR(r.sol.objective, 3000.0, 1e-9);
  EXPECT_NEAR(r.value("DispatchGen", {"wind", "t0"}), 40.0, 1e-9);
  EXPECT_NEAR(r.value("DispatchGen", {"gas", "t0"}), 60.0, 1e-9);
}

TEST(Dispatch, MissingCapacityFactorIsMissingInput) {
  io::MemorySource src;
  toy::timescales(src, 2);
  toy::financials(src);
  toy::demand(src, {"z"}, {100, 100});
  toy::projects(src, {Project{.name = "wind", .sources = "wind", .variable = true}});
  toy::existing(src, {{"wind", 80}});
  toy::capacity_factors(src, "wind", {0.5});
  EXPECT_EQ(kind_of([&] { (void)build_model(toy::kDispatchModules, src); }), ErrorKind::MissingInput);
}

TEST(Dispatch, UncommittedDispatchableNeedsNoCommit) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {100});
  toy::projects(src, {Project{.name = "gas", .variable_om = 50}});
  toy::existing(src, {{"gas", 200}});
  EXPECT_EQ(kind_of([&] {
              (void)build_model({"timescales", "financials", "balancing.load_zones", "generators.core.build",
                                 "generators.core.dispatch"},
                                src);
            }),
            ErrorKind::ConfigError);
}

TEST(Dispatch, NoCommitAppliesOutageDerate) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {100});
  toy::projects(src, {Project{.name = "gas", .variable_om = 50, .outage = 0.1}});
  toy::existing(src, {{"gas", 100}});
  auto r = toy::solve(toy::with(toy::kDispatchModules, {"balancing.unserved_load"}), src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("DispatchGen", {"gas", "t0"}), 90.0, 1e-9);
}

TEST(Commitment, MinimumLoadRow) {
  auto src = toy::uc_instance({{.capacity = 100, .min_load = 0.4, .marginal = 10}}, {60});
  auto run = build_model(toy::kUnitCommitmentModules, src);
  auto& m = run->model;
  const auto* lower = m.find_constraint("Dispatch_Lower_Limit[u0,t0]");
  const auto* upper = m.find_constraint("Dispatch_Upper_Limit[u0,t0]");
  ASSERT_NE(lower, nullptr);
  ASSERT_NE(upper, nullptr);
  auto commit = m.variable_id("Commit", {"u0", "t0"});
  auto dispatch = m.variable_id("DispatchGen", {"u0", "t0"});
  EXPECT_DOUBLE_EQ(lower->expression.coefficient(commit), -0.4);
  EXPECT_DOUBLE_EQ(lower->expression.coefficient(dispatch), 1.0);
  EXPECT_EQ(lower->sense, Sense::GreaterEqual);
  EXPECT_DOUBLE_EQ(upper->expression.coefficient(commit), -1.0);
  // with 100 MW committed the dispatch window is [40, 100]
  auto r = toy::solve(toy::kUnitCommitmentModules, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("Commit", {"u0", "t0"}), 100.0, 1e-9);
}

TEST(Commitment, CircularStartupsEqualShutdowns) {
  auto src = toy::uc_instance({{.capacity = 100, .min_load = 0.4, .marginal = 10, .no_load = 1, .startup = 5}},
                              {0, 80, 80, 0});
  auto r = toy::solve(toy::kUnitCommitmentModules, src);
  ASSERT_TRUE(r.sol.optimal());
  double starts = 0, stops = 0;
  for (int k = 0; k < 4; ++k) {
    starts += r.value("Startup", {"u0", toy::tp(k)});
    stops += r.value("Shutdown", {"u0", toy::tp(k)});
  }
  EXPECT_NEAR(r.value("Commit", {"u0", "t0"}), 0.0, 1e-9);
  EXPECT_NEAR(r.value("Commit", {"u0", "t1"}), 100.0, 1e-9);
  EXPECT_NEAR(starts, 100.0, 1e-9);
  EXPECT_NEAR(starts, stops, 1e-9);
}

TEST(Commitment, TwoUnitsFourHoursMatchBruteForce) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> marginal(10, 40), no_load(0, 8), startup(0, 200);
  const std::vector<double> demand = {40, 130, 150, 60};
  for (int draw = 0; draw < 10; ++draw) {
    std::vector<oracle::UcUnit> units = {
        {.capacity = 100, .min_load = 0.4, .marginal = marginal(rng), .no_load = no_load(rng), .startup = startup(rng),
         .min_up = 2, .min_down = 1},
        {.capacity = 80, .min_load = 0.5, .marginal = marginal(rng), .no_load = no_load(rng), .startup = startup(rng),
         .min_up = 1, .min_down = 2}};
    auto expected = oracle::uc_brute_force(units, demand);
    ASSERT_TRUE(std::isfinite(expected));
    auto r = toy::solve(toy::kUnitCommitmentModules, toy::uc_instance(units, demand));
    ASSERT_TRUE(r.sol.optimal()) << "draw " << draw;
    EXPECT_TRUE(oracle::close_rel(r.sol.objective, expected, 1e-6))
        << "draw " << draw << ": " << r.sol.objective << " vs " << expected;
    EXPECT_LT(toy::reconciliation_error(r), 1e-9);
  }
}

TEST(Commitment, MinimumUptimeHoldsUnitOnline) {
  // a one-hour peak with an 3 h minimum uptime keeps the unit on for 3 h
  auto src = toy::uc_instance({{.capacity = 100, .min_load = 0, .marginal = 10, .no_load = 5, .min_up = 3}},
                              {0, 0, 50, 0, 0, 0});
  auto r = toy::solve(toy::kUnitCommitmentModules, src);
  ASSERT_TRUE(r.sol.optimal());
  double hours_on = 0;
  for (int k = 0; k < 6; ++k) hours_on += r.value("Commit", {"u0", toy::tp(k)}) / 100.0;
  EXPECT_NEAR(hours_on, 3.0, 1e-9);
  EXPECT_NEAR(r.sol.objective, oracle::uc_brute_force({{.capacity = 100, .marginal = 10, .no_load = 5, .min_up = 3}},
                                                      {0, 0, 50, 0, 0, 0}),
              1e-6);
}

TEST(FuelUse, UpperEnvelopeOfSegments) {
  // intercept 0.5, slope 8 at commit 100, dispatch 60: 530 MMBtu/h
  auto src = toy::uc_instance({{.capacity = 100, .min_load = 0.6, .marginal = 8, .no_load = 0.5}}, {60});
  src.set("heat_rate_segments", "project,segment,intercept,slope\nu0,0,1.0,7.0\nu0,1,0.5,8.0\n");
  auto r = toy::solve(toy::kUnitCommitmentModules, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("FuelUse", {"u0", "t0", "gas"}), 530.0, 1e-9);
  EXPECT_NEAR(std::max(1.0 * 100 + 7.0 * 60, 0.5 * 100 + 8.0 * 60), 530.0, 1e-12);
}

TEST(FuelUse, NonConvexSegmentsRejected) {
  auto src = toy::uc_instance({{.capacity = 100, .marginal = 8}}, {60});
  src.set("heat_rate_segments", "project,segment,intercept,slope\nu0,0,0.5,8.0\nu0,1,1.0,9.0\n");
  EXPECT_EQ(kind_of([&] { (void)build_model(toy::kUnitCommitmentModules, src); }), ErrorKind::InputError);
}

TEST(FuelUse, FueledProjectWithoutHeatRateIsMissingInput) {
  auto src = toy::uc_instance({{.capacity = 100, .marginal = 8}}, {60});
  src.set("heat_rate_segments", "project,segment,intercept,slope\n");
  EXPECT_EQ(kind_of([&] { (void)build_model(toy::kUnitCommitmentModules, src); }), ErrorKind::MissingInput);
}

TEST(FuelUse, CommittedFueledProjectNeedsFuelUseModule) {
  auto src = toy::uc_instance({{.capacity = 100, .marginal = 8}}, {60});
  auto modules = toy::kUnitCommitmentModules;
  std::erase(modules, "generators.core.commit.fuel_use");
  EXPECT_EQ(kind_of([&] { (void)build_model(modules, src); }), ErrorKind::ConfigError);
}

TEST(DiscreteBuild, BuildsWholeUnits) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {120});
  toy::projects(src, {Project{.name = "gas", .variable_om = 10, .unit_size = 50}});
  toy::build_costs(src, {{"gas", 30000}});
  auto modules = toy::with(toy::kDispatchModules, {"generators.core.proj_discrete_build"});
  auto r = toy::solve(modules, src);
  ASSERT_TRUE(r.sol.optimal());
  EXPECT_NEAR(r.value("BuildUnits", {"gas", "2020"}), 3.0, 1e-9);
  EXPECT_NEAR(r.value("BuildGen", {"gas", "2020"}), 150.0, 1e-9);
  auto lp = solver::to_standard_form(r.run->model);
  auto enumerated = oracle::enumerate_milp([&] {
    auto bounded = lp;
    for (std::size_t j = 0; j < bounded.num_cols(); ++j)
      if (bounded.integer[j]) bounded.upper[j] = 10;
    return bounded;
  }());
  ASSERT_TRUE(enumerated.has_value());
  EXPECT_NEAR(r.sol.objective, *enumerated, 1e-6);
}

TEST(DiscreteCommit, MinimumLoadFloorOnSmallLoad) {
  // one 50 MW unit at 40% minimum: a 10 MW load cannot be met exactly
  const oracle::UcUnit unit{.capacity = 50, .min_load = 0.4, .marginal = 10};
  auto small = toy::solve(toy::kUnitCommitmentModules, toy::uc_instance({unit}, {10}));
  EXPECT_EQ(small.sol.status, solver::Status::Infeasible);
  auto lp = solver::to_standard_form(build_model(toy::kUnitCommitmentModules, toy::uc_instance({unit}, {10}))->model);
  for (std::size_t j = 0; j < lp.num_cols(); ++j)
    if (lp.integer[j]) lp.upper[j] = std::min(lp.upper[j], 10.0);
  EXPECT_FALSE(oracle::enumerate_milp(lp).has_value());
  EXPECT_FALSE(std::isfinite(oracle::uc_brute_force({unit}, {10})));

  auto fine = toy::solve(toy::kUnitCommitmentModules, toy::uc_instance({unit}, {25}));
  ASSERT_TRUE(fine.sol.optimal());
  EXPECT_NEAR(fine.value("DispatchGen", {"u0", "t0"}), 25.0, 1e-9);
  EXPECT_GE(fine.value("DispatchGen", {"u0", "t0"}), 0.4 * 50 - 1e-9);
}

TEST(DiscreteCommit, RequiresCommitOperate) {
  auto src = toy::uc_instance({{.capacity = 50, .marginal = 10}}, {25});
  EXPECT_EQ(kind_of([&] {
              (void)build_model(toy::with(toy::kDispatchModules, {"generators.core.commit.discrete"}), src);
            }),
            ErrorKind::ConfigError);
}

namespace {

// 24 hourly timepoints, base load 40 with a 140 MW four-hour peak.
io::MemorySource hydro_day(double avg_flow) {
  io::MemorySource src;
  toy::timescales(src, 24);
  toy::financials(src);
  std::vector<double> load(24, 40.0);
  for (int h = 10; h < 14; ++h) load[static_cast<std::size_t>(h)] = 140.0;
  toy::demand(src, {"z"}, load);
  src.set("build_costs", "project,period,capital_cost\n");
  std::string projects = toy::kProjectHeader;
  projects.pop_back();
  projects += ",is_hydro_simple\n";
  projects += "base,z,30,0,10,other,0,0,0,0,0,0,0,0,0,,0\n";
  projects += "peaker,z,30,0,100,other,0,0,0,0,0,0,0,0,0,,0\n";
  projects += "hydro,z,30,0,0,water,0,0,0,0,0,0,0,0,0,,1\n";
  src.set("projects", projects);
  toy::existing(src, {{"base", 40}, {"peaker", 200}, {"hydro", 100}});
  src.set("hydro_flows", "project,timeseries,avg_flow_mw\nhydro,s," + toy::num(avg_flow) + "\n");
  return src;
}

}  // namespace

TEST(HydroSimple, DailyEnergyBudget) {
  auto r = toy::solve(toy::with(toy::kDispatchModules, {"generators.extensions.hydro_simple"}), hydro_day(30));
  ASSERT_TRUE(r.sol.optimal());
  double energy = 0;
  for (int h = 0; h < 24; ++h) energy += r.value("DispatchGen", {"hydro", toy::tp(h)});
  EXPECT_NEAR(energy, 30.0 * 24.0, 1e-6);
  EXPECT_NEAR(energy, 720.0, 1e-6);
}

TEST(HydroSimple, ConcentratesInPeakHours) {
  auto r = toy::solve(toy::with(toy::kDispatchModules, {"generators.extensions.hydro_simple"}), hydro_day(30));
  ASSERT_TRUE(r.sol.optimal());
  for (int h = 10; h < 14; ++h) EXPECT_NEAR(r.value("DispatchGen", {"hydro", toy::tp(h)}), 100.0, 1e-6);
  for (int h = 0; h < 24; ++h) EXPECT_NEAR(r.value("DispatchGen", {"peaker", toy::tp(h)}), 0.0, 1e-6);
  // base serves the 1360 MWh day minus 720 MWh of water
  EXPECT_NEAR(r.sol.objective, 10.0 * (1360.0 - 720.0), 1e-6);
}

TEST(HydroSimple, ZeroFlowMeansNoDispatch) {
  auto r = toy::solve(toy::with(toy::kDispatchModules, {"generators.extensions.hydro_simple"}), hydro_day(0));
  ASSERT_TRUE(r.sol.optimal());
  for (int h = 0; h < 24; ++h) EXPECT_NEAR(r.value("DispatchGen", {"hydro", toy::tp(h)}), 0.0, 1e-9);
}
