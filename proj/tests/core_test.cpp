#include <gtest/gtest.h>

#include "gridopt/app/cli.hpp"
#include "test_support.hpp"

using namespace gridopt;

namespace {

const std::string kFixtures = GRIDOPT_FIXTURES;

ModelGraph with_vars(VarId& x, VarId& y) {
  ModelGraph m;
  m.advance_to(Phase::DefineComponents);
  x = m.add_variable("x");
  y = m.add_variable("y");
  return m;
}

}  // namespace

TEST(LinearCombine, CancelsConstants) {
  VarId x, y;
  auto m = with_vars(x, y);
  auto e = linear_combine({{1.0, LinearExpression(x, 2.0) + 1.0}, {1.0, LinearExpression(x, 3.0) + -1.0}});
  EXPECT_DOUBLE_EQ(e.coefficient(x), 5.0);
  EXPECT_DOUBLE_EQ(e.constant(), 0.0);
  EXPECT_EQ(e.terms().size(), 1u);
}

TEST(LinearCombine, ZeroWeightDropsTerm) {
  VarId x, y;
  auto m = with_vars(x, y);
  auto e = linear_combine({{0.0, LinearExpression(y, 7.0) + 3.0}, {1.0, LinearExpression(x)}});
  EXPECT_EQ(e.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(e.coefficient(x), 1.0);
  EXPECT_DOUBLE_EQ(e.constant(), 0.0);
}

TEST(LinearCombine, MergesSharedVariables) {
  VarId x, y;
  auto m = with_vars(x, y);
  auto e = linear_combine({{2.0, LinearExpression(x) + LinearExpression(y)}, {3.0, LinearExpression(y)}});
  EXPECT_DOUBLE_EQ(e.coefficient(x), 2.0);
  EXPECT_DOUBLE_EQ(e.coefficient(y), 5.0);
}

TEST(LinearCombine, RejectsNonFiniteWeight) {
  VarId x, y;
  auto m = with_vars(x, y);
  try {
    (void)linear_combine({{std::nan(""), LinearExpression(x)}});
    FAIL() << "expected NonFiniteCoefficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteCoefficient);
  }
}

TEST(Registry, InjectionsAndWithdrawalsStayDisjoint) {
  ModelGraph m;
  m.advance_to(Phase::DefineComponents);
  m.register_component(ComponentKind::Injection, "DispatchGen");
  m.register_component(ComponentKind::Withdrawal, "ChargeStorage");
  EXPECT_EQ(m.registry().names(ComponentKind::Injection), std::vector<std::string>{"DispatchGen"});
  EXPECT_EQ(m.registry().names(ComponentKind::Withdrawal), std::vector<std::string>{"ChargeStorage"});
}

TEST(Registry, DuplicateInjectionFails) {
  ModelGraph m;
  m.advance_to(Phase::DefineComponents);
  m.register_component(ComponentKind::Injection, "DispatchGen");
  try {
    m.register_component(ComponentKind::Injection, "DispatchGen");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Duplicate);
  }
}

TEST(Registry, RegistrationOutsideDefineComponentsFails) {
  ModelGraph m;
  m.advance_to(Phase::DefineDynamicComponents);
  try {
    m.register_component(ComponentKind::Injection, "Late");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PhaseViolation);
  }
}

TEST(ModelGraph, PhasesOnlyMoveForward) {
  ModelGraph m;
  m.advance_to(Phase::Assembled);
  EXPECT_THROW(m.advance_to(Phase::DefineComponents), Error);
  try {
    (void)m.add_variable("late");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PhaseViolation);
  }
}

TEST(RegisterModule, SingleModule) {
  const auto& catalog = modules::builtin_catalog();
  auto list = register_module(catalog.create("timescales")->descriptor(), {}, catalog);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].name, "timescales");
}

TEST(RegisterModule, DuplicateModule) {
  const auto& catalog = modules::builtin_catalog();
  auto d = catalog.create("timescales")->descriptor();
  auto list = register_module(d, {}, catalog);
  try {
    (void)register_module(d, list, catalog);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateModule);
  }
}

TEST(RegisterModule, FifteenModuleCaseStudyListKeepsPrintedOrder) {
  const std::vector<std::string> printed = {"timescales",
                                            "financials",
                                            "balancing.load_zones",
                                            "energy_sources.properties",
                                            "generators.core.build",
                                            "generators.core.dispatch",
                                            "reporting",
                                            "energy_sources.fuel_costs.markets",
                                            "generators.core.proj_discrete_build",
                                            "generators.core.commit.operate",
                                            "generators.core.commit.fuel_use",
                                            "generators.core.commit.discrete",
                                            "generators.extensions.storage",
                                            "balancing.operating_reserves.areas",
                                            "balancing.operating_reserves.spinning_reserves_advanced"};
  auto names = app::read_module_list(kFixtures + "/reference_modules.txt");
  EXPECT_EQ(names, printed);
  const auto& catalog = modules::builtin_catalog();
  std::vector<ModuleDescriptor> list;
  for (const auto& n : names) list = register_module(catalog.create(n)->descriptor(), std::move(list), catalog);
  ASSERT_EQ(list.size(), 15u);
  for (std::size_t i = 0; i < printed.size(); ++i) EXPECT_EQ(list[i].name, printed[i]);
}

TEST(RegisterModule, UnknownNameFails) {
  try {
    (void)modules::builtin_catalog().create("generators.core.teleport");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownModule);
  }
}

TEST(BuildModel, TimescalesAndFinancialsOnlyGiveEmptyModel) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  auto run = build_model({"timescales", "financials"}, src);
  EXPECT_EQ(run->model.num_variables(), 0u);
  EXPECT_EQ(run->model.num_constraints(), 0u);
  EXPECT_TRUE(run->model.objective().terms().empty());
  EXPECT_DOUBLE_EQ(run->model.objective().constant(), 0.0);
  EXPECT_EQ(run->model.phase(), Phase::Assembled);
}

TEST(BuildModel, GeneratorsWithoutTimescalesIsMissingInput) {
  io::DirectorySource src(kFixtures + "/mini_grid");
  try {
    (void)build_model({"financials", "balancing.load_zones", "generators.core.build"}, src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingInput);
    EXPECT_NE(std::string(e.what()).find("timepoint"), std::string::npos) << e.what();
  }
}

TEST(BuildModel, EmptyModuleListIsConfigError) {
  io::MemorySource src;
  try {
    (void)build_model({}, src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

// Ten-module economic-dispatch build of the mini-grid. Counts follow the
// per-module cardinality formulas:
//   BuildGen        projects x periods with a capital cost   3 x 2
//   DispatchGen     projects x operable timepoints           3 x 12
//   FuelUse         fueled projects x timepoints x fuels     1 x 12 x 1
//   UnservedLoad    zones x timepoints                       2 x 12
//   Energy_Balance  zones x timepoints                       2 x 12
//   Dispatch_Upper_Limit  projects x timepoints              3 x 12
//   Fuel_Use_Rate   fueled projects x timepoints x fuels     1 x 12
TEST(BuildModel, MiniGridTenModuleCountsMatchFormulas) {
  io::DirectorySource src(kFixtures + "/mini_grid");
  const std::vector<std::string> ten = {"timescales",
                                        "financials",
                                        "balancing.load_zones",
                                        "balancing.unserved_load",
                                        "energy_sources.properties",
                                        "energy_sources.fuel_costs.simple",
                                        "generators.core.build",
                                        "generators.core.dispatch",
                                        "generators.core.no_commit",
                                        "reporting"};
  auto run = build_model(ten, src);
  const auto& d = run->data;
  const std::size_t tps = d.ts().timepoints().size();
  const std::size_t periods = d.ts().periods().size();
  ASSERT_EQ(tps, 12u);
  ASSERT_EQ(periods, 2u);
  const std::size_t projects = d.projects.size(), zones = d.zones.size();
  std::size_t fueled = 0;
  for (const auto& g : d.projects) fueled += modules::is_fueled(d, g) ? 1 : 0;
  ASSERT_EQ(fueled, 1u);

  std::map<std::string, std::size_t> vars, rows;
  auto component = [](const std::string& n) { return n.substr(0, n.find('[')); };
  for (const auto& v : run->model.variables()) ++vars[component(v.name)];
  for (const auto& c : run->model.constraints()) ++rows[component(c.name)];

  EXPECT_EQ(vars["BuildGen"], projects * periods);
  EXPECT_EQ(vars["DispatchGen"], projects * tps);
  EXPECT_EQ(vars["FuelUse"], fueled * tps);
  EXPECT_EQ(vars["UnservedLoad"], zones * tps);
  EXPECT_EQ(run->model.num_variables(), projects * periods + projects * tps + fueled * tps + zones * tps);
  EXPECT_EQ(rows["Energy_Balance"], zones * tps);
  EXPECT_EQ(rows["Dispatch_Upper_Limit"], projects * tps);
  EXPECT_EQ(rows["Fuel_Use_Rate"], fueled * tps);
  EXPECT_EQ(run->model.num_constraints(), zones * tps + projects * tps + fueled * tps);
}

TEST(Options, UnknownOverrideIsConfigError) {
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  try {
    (void)build_model({"timescales", "financials"}, src, {{"no_such_option", "1"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}
