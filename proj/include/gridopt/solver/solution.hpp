#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/solver/standard_form.hpp"

namespace gridopt::solver {

enum class Status { Optimal, Infeasible, Unbounded, GapLimit };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::GapLimit: return "gap-limit";
  }
  return "unknown";
}

enum class Backend { Internal, External };

struct SolverOptions {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double relative_mip_gap = 1e-6;
  long max_iterations = 1'000'000;
  long max_nodes = 200'000;
  Backend backend = Backend::Internal;
  std::string external_command;  // template with {input} and {output}
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> values;  // per column
  double objective = 0.0;
  std::vector<double> duals;   // per row, d(objective)/d(rhs); LP solves only
  double mip_gap = 0.0;
  long iterations = 0;
  long nodes = 0;

  bool optimal() const { return status == Status::Optimal; }

  double value(const StandardFormLP& lp, const std::string& name) const {
    auto col = lp.column(name);
    return col < 0 ? 0.0 : values.at(static_cast<std::size_t>(col));
  }

  double value(VarId id) const { return values.at(static_cast<std::size_t>(id.index)); }

  double evaluate(const LinearExpression& e) const { return e.evaluate(values); }
};

// Largest violation over rows and column bounds.
inline double max_primal_residual(const StandardFormLP& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    double lhs = 0.0;
    for (const auto& e : lp.rows[i]) lhs += e.value * x[static_cast<std::size_t>(e.col)];
    double viol = 0.0;
    switch (lp.senses[i]) {
      case Sense::LessEqual: viol = lhs - lp.rhs[i]; break;
      case Sense::GreaterEqual: viol = lp.rhs[i] - lhs; break;
      case Sense::Equal: viol = std::abs(lhs - lp.rhs[i]); break;
    }
    worst = std::max(worst, viol);
  }
  for (std::size_t j = 0; j < lp.num_cols(); ++j) {
    worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  return worst;
}

}  // namespace gridopt::solver
