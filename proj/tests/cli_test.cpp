#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gridopt/app/cli.hpp"
#include "test_support.hpp"

using namespace gridopt;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = GRIDOPT_FIXTURES;
const fs::path kMiniGrid = kFixtures / "mini_grid";

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

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fresh scratch directory removed on destruction.
struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("gridopt_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    app::write_text(dir / name, text);
    return dir / name;
  }
  // Copy of the mini grid that a test may edit.
  fs::path mini_grid() const {
    fs::copy(kMiniGrid, dir / "grid", fs::copy_options::recursive);
    return dir / "grid";
  }
};

app::ScenarioConfig mini_config(const fs::path& outputs) {
  app::ScenarioConfig c;
  c.name = "base";
  c.module_list = kMiniGrid / "modules.txt";
  c.inputs_dir = kMiniGrid;
  c.outputs_dir = outputs;
  return c;
}

}  // namespace

TEST(ModuleList, UnknownModuleNamesLine) {
  Scratch s;
  auto path = s.write("modules.txt", "timescales\n# comment\nfinancials\ngenerators.core.teleport\n");
  EXPECT_EQ(kind_of([&] { (void)app::read_module_list(path); }), ErrorKind::UnknownModule);
  EXPECT_NE(message_of([&] { (void)app::read_module_list(path); }).find("line 4"), std::string::npos);
}

TEST(ModuleList, DuplicateModuleNamesLine) {
  Scratch s;
  auto path = s.write("modules.txt", "timescales\nfinancials\ntimescales\n");
  EXPECT_EQ(kind_of([&] { (void)app::read_module_list(path); }), ErrorKind::DuplicateModule);
  EXPECT_NE(message_of([&] { (void)app::read_module_list(path); }).find("line 3"), std::string::npos);
}

TEST(ModuleList, CommentsAndBlankLinesSkipped) {
  Scratch s;
  auto path = s.write("modules.txt", "# header\n\ntimescales  # trailing\n   financials\n");
  EXPECT_EQ(app::read_module_list(path), (std::vector<std::string>{"timescales", "financials"}));
}

TEST(ModuleList, EmptyListIsConfigError) {
  Scratch s;
  app::ScenarioConfig c = mini_config(s.dir / "out");
  c.module_list = s.write("modules.txt", "# nothing\n");
  auto report = app::run_scenario(c);
  EXPECT_EQ(report.status, "error");
  EXPECT_EQ(report.exit_code, app::kExitConfig);
}

TEST(Inputs, MissingTableIsMissingInput) {
  Scratch s;
  auto grid = s.mini_grid();
  fs::remove(grid / "zone_demand.csv");
  io::DirectorySource src(grid);
  EXPECT_EQ(kind_of([&] { (void)build_model(app::read_module_list(grid / "modules.txt"), src); }),
            ErrorKind::MissingInput);
}

TEST(Inputs, ProjectInUnknownZoneIsIntegrityError) {
  Scratch s;
  auto grid = s.mini_grid();
  auto text = slurp(grid / "projects.csv");
  // move the first project to a zone that does not exist
  auto first_row = text.find('\n') + 1;
  auto comma1 = text.find(',', first_row);
  auto comma2 = text.find(',', comma1 + 1);
  text.replace(comma1 + 1, comma2 - comma1 - 1, "atlantis");
  app::write_text(grid / "projects.csv", text);
  io::DirectorySource src(grid);
  const auto kind = kind_of([&] { (void)build_model(app::read_module_list(grid / "modules.txt"), src); });
  EXPECT_TRUE(kind == ErrorKind::IntegrityError || kind == ErrorKind::DanglingZone) << static_cast<int>(kind);
}

TEST(MiniGrid, Dimensions) {
  io::DirectorySource src(kMiniGrid);
  auto run = build_model(app::read_module_list(kMiniGrid / "modules.txt"), src);
  EXPECT_EQ(run->data.zones.size(), 2u);
  EXPECT_EQ(run->data.projects.size(), 3u);
  EXPECT_EQ(run->data.ts().periods().size(), 2u);
}

TEST(MiniGrid, ObjectiveMatchesIndependentRecomputation) {
  io::DirectorySource src(kMiniGrid);
  auto r = toy::solve(app::read_module_list(kMiniGrid / "modules.txt"), src);
  ASSERT_TRUE(r.sol.optimal());
  // objective vector applied to the primal values
  EXPECT_NEAR(r.run->model.objective().evaluate(r.sol.values), r.sol.objective, 1e-6 * std::abs(r.sol.objective));
  // per-component NPV tables summed
  EXPECT_LT(toy::reconciliation_error(r), 1e-6);
  // every constraint holds at the reported point
  for (const auto& c : r.run->model.constraints()) {
    const double lhs = c.expression.evaluate(r.sol.values);
    const double tol = 1e-6 * std::max(1.0, std::abs(c.rhs));
    if (c.sense == Sense::LessEqual) {
      EXPECT_LE(lhs, c.rhs + tol) << c.name;
    }
    if (c.sense == Sense::GreaterEqual) {
      EXPECT_GE(lhs, c.rhs - tol) << c.name;
    }
    if (c.sense == Sense::Equal) {
      EXPECT_NEAR(lhs, c.rhs, tol) << c.name;
    }
  }
}

TEST(Determinism, TwoRunsAreByteIdentical) {
  Scratch s;
  auto a = mini_config(s.dir / "a");
  auto b = mini_config(s.dir / "b");
  a.export_lp = b.export_lp = true;
  auto ra = app::run_scenario(a);
  auto rb = app::run_scenario(b);
  ASSERT_EQ(ra.exit_code, app::kExitOptimal) << ra.message;
  ASSERT_EQ(ra.manifest, rb.manifest);
  EXPECT_NE(std::find(ra.manifest.begin(), ra.manifest.end(), "model.lp"), ra.manifest.end());
  for (const auto& f : ra.manifest) EXPECT_EQ(slurp(a.outputs_dir / f), slurp(b.outputs_dir / f)) << f;
}

TEST(Batch, ThreadCountDoesNotChangeResults) {
  Scratch s;
  auto configs = app::read_scenario_list(kMiniGrid / "scenarios.txt");
  ASSERT_EQ(configs.size(), 5u);
  auto serial = configs, parallel = configs;
  for (auto& c : serial) c.outputs_dir = s.dir / "serial" / c.name;
  for (auto& c : parallel) c.outputs_dir = s.dir / "parallel" / c.name;
  auto r1 = app::run_batch(serial, 1);
  auto r4 = app::run_batch(parallel, 4);
  EXPECT_EQ(app::batch_summary_csv(r1), app::batch_summary_csv(r4));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EXPECT_EQ(r1[i].exit_code, app::kExitOptimal) << r1[i].message;
    for (const auto& f : r1[i].manifest)
      EXPECT_EQ(slurp(serial[i].outputs_dir / f), slurp(parallel[i].outputs_dir / f)) << configs[i].name << "/" << f;
  }
}

TEST(Batch, FailingScenarioReportedWithoutStoppingOthers) {
  Scratch s;
  auto list = s.write("scenarios.txt", "good --modules " + (kMiniGrid / "modules.txt").string() + " --inputs " +
                                           kMiniGrid.string() + "\nbad --modules " +
                                           (kMiniGrid / "modules.txt").string() + " --inputs nowhere\n");
  auto reports = app::run_batch(app::read_scenario_list(list), 2);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].exit_code, app::kExitOptimal) << reports[0].message;
  EXPECT_EQ(reports[1].status, "error");
  EXPECT_EQ(reports[1].exit_code, app::kExitConfig);
  EXPECT_NE(app::batch_summary_csv(reports).find("bad,error,,4,"), std::string::npos);
}

TEST(Batch, DuplicateScenarioNameRejected) {
  Scratch s;
  auto list = s.write("scenarios.txt", "a --inputs .\na --inputs .\n");
  EXPECT_EQ(kind_of([&] { (void)app::read_scenario_list(list); }), ErrorKind::ConfigError);
}

TEST(ScenarioLine, ParsesFlags) {
  auto c = app::parse_scenario_line("hi --modules m.txt --inputs in --set carbon_tax=5 --set rps_target=0.3 "
                                    "--backend external --allow-nonoptimal --export-lp",
                                    "/base");
  EXPECT_EQ(c.name, "hi");
  EXPECT_EQ(c.module_list, fs::path("/base/m.txt"));
  EXPECT_EQ(c.inputs_dir, fs::path("/base/in"));
  EXPECT_EQ(c.outputs_dir, fs::path("/base/outputs/hi"));
  EXPECT_EQ(c.overrides.at("carbon_tax"), "5");
  EXPECT_EQ(c.overrides.at("rps_target"), "0.3");
  EXPECT_EQ(c.solver.backend, solver::Backend::External);
  EXPECT_TRUE(c.allow_nonoptimal);
  EXPECT_TRUE(c.export_lp);
}

TEST(ScenarioLine, BadFlagsRejected) {
  EXPECT_EQ(kind_of([] { (void)app::parse_scenario_line("x --bogus", "/"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { (void)app::parse_scenario_line("x --set novalue", "/"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { (void)app::parse_scenario_line("x --modules", "/"); }), ErrorKind::ConfigError);
}

TEST(ExitCodes, StatusMapping) {
  EXPECT_EQ(app::exit_code_for(solver::Status::Optimal, false), 0);
  EXPECT_EQ(app::exit_code_for(solver::Status::Infeasible, false), 2);
  EXPECT_EQ(app::exit_code_for(solver::Status::Unbounded, false), 3);
  EXPECT_EQ(app::exit_code_for(solver::Status::GapLimit, false), 5);
  EXPECT_EQ(app::exit_code_for(ErrorKind::MissingInput), 4);
  EXPECT_EQ(app::exit_code_for(ErrorKind::UnknownModule), 4);
  EXPECT_EQ(app::exit_code_for(ErrorKind::NodeLimit), 5);
  EXPECT_EQ(app::exit_code_for(ErrorKind::SolverProcessFailure), 5);
}

TEST(ExitCodes, InfeasibleScenarioExitsTwo) {
  // 50 MW of load, 10 MW of existing supply, nothing buildable, no unserved slack
  Scratch s;
  io::MemorySource src;
  toy::timescales(src, 1);
  toy::financials(src);
  toy::demand(src, {"z"}, {50});
  toy::projects(src, {toy::Project{.name = "gen", .variable_om = 10}});
  toy::existing(src, {{"gen", 10}});
  fs::create_directories(s.dir / "in");
  for (const auto& [table, csv] : src.tables()) s.write("in/" + table + ".csv", csv);
  std::string mods;
  for (const auto& m : toy::kDispatchModules) mods += m + "\n";
  app::ScenarioConfig c;
  c.module_list = s.write("modules.txt", mods);
  c.inputs_dir = s.dir / "in";
  c.outputs_dir = s.dir / "out";
  auto report = app::run_scenario(c);
  EXPECT_EQ(report.status, "infeasible") << report.message;
  EXPECT_EQ(report.exit_code, app::kExitInfeasible);
  c.allow_nonoptimal = true;
  EXPECT_EQ(app::run_scenario(c).exit_code, app::kExitOptimal);
}
