#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/solver/simplex.hpp"
#include "gridopt/solver/solution.hpp"
#include "gridopt/solver/standard_form.hpp"

namespace gridopt::solver {

namespace detail {

struct Node {
  double bound = 0.0;
  long order = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Best bound first; creation order breaks ties.
struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  }
};

}  // namespace detail

// Best-first branch and bound over LP relaxations solved by the simplex.
// Branches on the most fractional integer column, lowest index on ties.
inline Solution branch_and_bound(const StandardFormLP& lp, const SolverOptions& opts = {}) {
  Solution best;
  best.status = Status::Infeasible;
  double incumbent = kInf;
  long nodes = 0;
  long iterations = 0;

  auto prune_level = [&]() {
    return incumbent - opts.relative_mip_gap * std::max(1.0, std::abs(incumbent));
  };

  std::priority_queue<detail::Node, std::vector<detail::Node>, detail::NodeWorse> open;
  long order = 0;
  open.push({-kInf, order++, lp.lower, lp.upper});
  double global_bound = -kInf;

  while (!open.empty()) {
    auto node = open.top();
    open.pop();
    if (node.bound >= prune_level()) continue;
    if (nodes >= opts.max_nodes) {
      open.push(std::move(node));
      break;
    }
    ++nodes;
    auto relax = simplex_solve(lp, opts, node.lower, node.upper);
    iterations += relax.iterations;
    if (relax.status == Status::Unbounded) {
      if (incumbent == kInf) {
        best.status = Status::Unbounded;
        best.nodes = nodes;
        best.iterations = iterations;
        return best;
      }
      continue;
    }
    if (relax.status != Status::Optimal) continue;
    if (relax.objective >= prune_level()) continue;

    int branch_col = -1;
    double most_fractional = opts.integrality_tol;
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
      if (!lp.integer[j]) continue;
      double v = relax.values[j];
      double frac = std::abs(v - std::round(v));
      if (frac > most_fractional) {
        most_fractional = frac;
        branch_col = static_cast<int>(j);
      }
    }
    if (branch_col < 0) {
      for (std::size_t j = 0; j < lp.num_cols(); ++j) {
        if (lp.integer[j]) relax.values[j] = std::round(relax.values[j]);
      }
      relax.objective = lp.objective_constant;
      for (std::size_t j = 0; j < lp.num_cols(); ++j) relax.objective += lp.objective[j] * relax.values[j];
      if (relax.objective < incumbent) {
        incumbent = relax.objective;
        best = std::move(relax);
        best.duals.clear();
      }
      continue;
    }

    auto col = static_cast<std::size_t>(branch_col);
    double v = relax.values[col];
    detail::Node down{relax.objective, order++, node.lower, node.upper};
    down.upper[col] = std::floor(v);
    detail::Node up{relax.objective, order++, std::move(node.lower), std::move(node.upper)};
    up.lower[col] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  global_bound = open.empty() ? incumbent : std::min(open.top().bound, incumbent);
  best.nodes = nodes;
  best.iterations = iterations;
  if (incumbent == kInf) {
    if (!open.empty()) fail(ErrorKind::NodeLimit, "node limit reached without an integer solution");
    best.status = Status::Infeasible;
    return best;
  }
  best.mip_gap = (incumbent - global_bound) / std::max(1.0, std::abs(incumbent));
  best.status = open.empty() ? Status::Optimal : Status::GapLimit;
  if (best.status == Status::GapLimit && best.mip_gap <= opts.relative_mip_gap) best.status = Status::Optimal;
  return best;
}

// Dispatches to the simplex or branch and bound depending on integrality.
inline Solution solve(const StandardFormLP& lp, const SolverOptions& opts = {}) {
  if (lp.has_integers()) return branch_and_bound(lp, opts);
  return simplex_solve(lp, opts);
}

}  // namespace gridopt::solver
