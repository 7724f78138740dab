#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/io/table.hpp"
#include "gridopt/solver/lp_writer.hpp"
#include "gridopt/solver/solution.hpp"

namespace gridopt::solver {

// Plain-text solution format, one record per line:
//
//   # comment
//   status optimal|infeasible|unbounded|gap-limit
//   objective <real>
//   mip_gap <real>                (optional)
//   <column name> <value>         (LP-file names)
//   dual <row name> <value>       (optional)
//
// Columns absent from the file read as 0.
inline std::string format_solution(const StandardFormLP& lp, const Solution& sol) {
  const auto names = lp_names(lp);
  auto exact = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "# gridopt solution\n";
  out += "status " + std::string(to_string(sol.status)) + '\n';
  out += "objective " + exact(sol.objective) + '\n';
  out += "mip_gap " + exact(sol.mip_gap) + '\n';
  for (std::size_t j = 0; j < sol.values.size() && j < names.columns.size(); ++j) {
    out += names.columns[j] + ' ' + exact(sol.values[j]) + '\n';
  }
  for (std::size_t i = 0; i < sol.duals.size() && i < names.rows.size(); ++i) {
    out += "dual " + names.rows[i] + ' ' + exact(sol.duals[i]) + '\n';
  }
  return out;
}

struct ParsedSolution {
  Solution solution;
  std::vector<std::string> warnings;
};

inline ParsedSolution parse_solution(const std::string& text, const StandardFormLP& lp) {
  const auto names = lp_names(lp);
  std::map<std::string, std::size_t> col_of, row_of;
  for (std::size_t j = 0; j < names.columns.size(); ++j) col_of[names.columns[j]] = j;
  for (std::size_t i = 0; i < names.rows.size(); ++i) row_of[names.rows[i]] = i;

  ParsedSolution parsed;
  auto& sol = parsed.solution;
  sol.status = Status::Optimal;
  sol.values.assign(lp.num_cols(), 0.0);
  std::vector<bool> seen(lp.num_cols(), false);
  bool have_objective = false;
  bool have_duals = false;
  std::vector<double> duals(lp.num_rows(), 0.0);

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto parse_error = [&](const std::string& why) {
    fail(ErrorKind::ParseError, "solution line " + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const std::string& token) {
    auto v = io::parse_real(token);
    if (!v) parse_error("not a number: '" + token + "'");
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = io::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::istringstream fields{std::string(trimmed)};
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.size() == 2 && tok[0] == "status") {
      if (tok[1] == "optimal") sol.status = Status::Optimal;
      else if (tok[1] == "infeasible") sol.status = Status::Infeasible;
      else if (tok[1] == "unbounded") sol.status = Status::Unbounded;
      else if (tok[1] == "gap-limit") sol.status = Status::GapLimit;
      else parse_error("unknown status '" + tok[1] + "'");
    } else if (tok.size() == 2 && tok[0] == "objective") {
      sol.objective = number(tok[1]);
      have_objective = true;
    } else if (tok.size() == 2 && tok[0] == "mip_gap") {
      sol.mip_gap = number(tok[1]);
    } else if (tok.size() == 3 && tok[0] == "dual") {
      auto it = row_of.find(tok[1]);
      double v = number(tok[2]);
      if (it == row_of.end()) {
        parsed.warnings.push_back("unknown row '" + tok[1] + "' ignored");
      } else {
        duals[it->second] = v;
        have_duals = true;
      }
    } else if (tok.size() == 2) {
      double v = number(tok[1]);
      auto it = col_of.find(tok[0]);
      if (it == col_of.end()) {
        parsed.warnings.push_back("unknown variable '" + tok[0] + "' ignored");
      } else {
        sol.values[it->second] = v;
        seen[it->second] = true;
      }
    } else {
      parse_error("expected '<name> <value>'");
    }
  }
  if (!have_objective && sol.status == Status::Optimal) {
    fail(ErrorKind::ParseError, "solution has no objective header");
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j] && sol.status == Status::Optimal) {
      parsed.warnings.push_back("variable '" + names.columns[j] + "' missing, set to 0");
    }
  }
  if (have_duals) sol.duals = std::move(duals);
  return parsed;
}

inline std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

// Writes the LP, runs the command template with {input}/{output} substituted
// and returns the raw solution text.
inline std::string invoke_external(const std::filesystem::path& lp_path, const std::string& command_template,
                                   const std::filesystem::path& solution_path) {
  if (command_template.empty()) fail(ErrorKind::ConfigError, "no external solver command configured");
  std::filesystem::remove(solution_path);
  auto command = replace_all(replace_all(command_template, "{input}", lp_path.string()), "{output}",
                             solution_path.string());
  int rc = std::system(command.c_str());
  if (rc != 0) fail(ErrorKind::SolverProcessFailure, "command exited with status " + std::to_string(rc) + ": " + command);
  std::ifstream in(solution_path, std::ios::binary);
  if (!in) fail(ErrorKind::SolverProcessFailure, "solver wrote no solution file " + solution_path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ParsedSolution solve_external(const StandardFormLP& lp, const SolverOptions& opts,
                                     const std::filesystem::path& work_dir) {
  std::filesystem::create_directories(work_dir);
  auto lp_path = work_dir / "model.lp";
  auto sol_path = work_dir / "model.sol";
  write_lp_file(lp, lp_path);
  return parse_solution(invoke_external(lp_path, opts.external_command, sol_path), lp);
}

}  // namespace gridopt::solver
