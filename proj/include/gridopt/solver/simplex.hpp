#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/solver/solution.hpp"
#include "gridopt/solver/standard_form.hpp"

namespace gridopt::solver {

namespace detail {

// How an original column maps onto nonnegative tableau columns:
// x = offset + sign * x[primary] - x[negative].
struct ColumnMap {
  int primary = -1;
  int negative = -1;
  double sign = 1.0;
  double offset = 0.0;
};

enum class ColumnKind { Structural, Slack, Artificial };

// Dense two-phase primal simplex on  min c'x, Ax (<=,=,>=) b, x >= 0, b >= 0.
// Dantzig pricing with lowest-index tie breaks; switches permanently to
// Bland's rule once the number of degenerate pivots exceeds 3 * (m + n).
class DenseTableau {
 public:
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kCostTol = 1e-9;

  DenseTableau(std::size_t rows, std::size_t structural) : m_(rows), n_struct_(structural) {}

  int add_column(ColumnKind kind) {
    kinds_.push_back(kind);
    return static_cast<int>(kinds_.size() - 1);
  }

  void allocate() {
    width_ = kinds_.size() + 1;
    table_.assign(m_ * width_, 0.0);
    basis_.assign(m_, -1);
    cost_row_.assign(width_, 0.0);
  }

  double& at(std::size_t i, std::size_t j) { return table_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return table_[i * width_ + j]; }
  double& rhs(std::size_t i) { return table_[i * width_ + width_ - 1]; }
  double rhs(std::size_t i) const { return table_[i * width_ + width_ - 1]; }
  void set_basic(std::size_t row, int col) { basis_[row] = col; }
  int basic(std::size_t row) const { return basis_[row]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return kinds_.size(); }
  ColumnKind kind(std::size_t j) const { return kinds_[j]; }
  double reduced_cost(std::size_t j) const { return cost_row_[j]; }
  double objective() const { return -cost_row_[width_ - 1]; }
  long iterations() const { return iterations_; }

  void price(const std::vector<double>& costs) {
    std::fill(cost_row_.begin(), cost_row_.end(), 0.0);
    for (std::size_t j = 0; j < cols(); ++j) cost_row_[j] = costs[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = costs[static_cast<std::size_t>(basis_[i])];
      if (cb == 0.0) continue;
      const double* row = &table_[i * width_];
      for (std::size_t j = 0; j < width_; ++j) cost_row_[j] -= cb * row[j];
    }
  }

  enum class Outcome { Optimal, Unbounded };

  Outcome iterate(bool allow_artificial, long max_iterations) {
    const std::size_t degenerate_limit = 3 * (m_ + cols());
    while (true) {
      int enter = choose_entering(allow_artificial);
      if (enter < 0) return Outcome::Optimal;
      int leave = choose_leaving(static_cast<std::size_t>(enter));
      if (leave < 0) return Outcome::Unbounded;
      if (rhs(static_cast<std::size_t>(leave)) <= 1e-12) {
        if (++degenerate_ > degenerate_limit) bland_ = true;
      }
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
      if (++iterations_ > max_iterations) {
        fail(ErrorKind::IterationLimit, "simplex exceeded " + std::to_string(max_iterations) + " iterations");
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    double* prow = &table_[r * width_];
    const double inv = 1.0 / prow[c];
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    }
    prow[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &table_[i * width_];
      double f = row[c];
      if (f == 0.0) continue;
      for (auto j : nonzero_) {
        row[j] -= f * prow[j];
        if (std::abs(row[j]) < 1e-13) row[j] = 0.0;
      }
      row[c] = 0.0;
    }
    double f = cost_row_[c];
    if (f != 0.0) {
      for (auto j : nonzero_) cost_row_[j] -= f * prow[j];
      cost_row_[c] = 0.0;
    }
    basis_[r] = static_cast<int>(c);
  }

  bool bland() const { return bland_; }

 private:
  int choose_entering(bool allow_artificial) const {
    int best = -1;
    double best_value = -kCostTol;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (!allow_artificial && kinds_[j] == ColumnKind::Artificial) continue;
      double d = cost_row_[j];
      if (d < -kCostTol) {
        if (bland_) return static_cast<int>(j);
        if (d < best_value) {
          best_value = d;
          best = static_cast<int>(j);
        }
      }
    }
    return best;
  }

  int choose_leaving(std::size_t c) const {
    int best = -1;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double a = at(i, c);
      if (a <= kPivotTol) continue;
      double ratio = std::max(rhs(i), 0.0) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[static_cast<std::size_t>(best)])) {
        best = static_cast<int>(i);
        best_ratio = ratio;
      }
    }
    return best;
  }

  std::size_t m_;
  std::size_t n_struct_;
  std::size_t width_ = 0;
  std::vector<ColumnKind> kinds_;
  std::vector<double> table_;
  std::vector<int> basis_;
  std::vector<double> cost_row_;
  std::vector<std::size_t> nonzero_;
  std::size_t degenerate_ = 0;
  bool bland_ = false;
  long iterations_ = 0;
};

}  // namespace detail

// Solves the LP relaxation of `lp` with the given column bounds (integrality is
// ignored). Returns primal values, objective and row duals.
inline Solution simplex_solve(const StandardFormLP& lp, const SolverOptions& opts,
                              std::span<const double> lower, std::span<const double> upper) {
  using detail::ColumnKind;
  const std::size_t n = lp.num_cols();
  Solution sol;

  std::vector<detail::ColumnMap> maps(n);
  std::vector<double> costs;
  int next = 0;
  std::vector<std::pair<int, double>> bound_rows;  // (tableau column, limit)
  for (std::size_t j = 0; j < n; ++j) {
    double lo = lower[j], hi = upper[j];
    if (lo > hi + opts.feasibility_tol) {
      sol.status = Status::Infeasible;
      return sol;
    }
    auto& map = maps[j];
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 0.0) {
      map.offset = lo;  // fixed: substituted out
    } else if (std::isfinite(lo)) {
      map.offset = lo;
      map.primary = next++;
      costs.push_back(lp.objective[j]);
      if (std::isfinite(hi)) bound_rows.push_back({map.primary, hi - lo});
    } else if (std::isfinite(hi)) {
      map.offset = hi;
      map.sign = -1.0;
      map.primary = next++;
      costs.push_back(-lp.objective[j]);
    } else {
      map.primary = next++;
      costs.push_back(lp.objective[j]);
      map.negative = next++;
      costs.push_back(-lp.objective[j]);
    }
  }
  const auto n_struct = static_cast<std::size_t>(next);
  const std::size_t m0 = lp.num_rows();
  const std::size_t m = m0 + bound_rows.size();

  // Row data after substitution, with rhs made nonnegative.
  std::vector<Sense> senses(m);
  std::vector<double> b(m);
  std::vector<double> flip(m, 1.0);
  for (std::size_t i = 0; i < m0; ++i) {
    double shift = 0.0;
    for (const auto& e : lp.rows[i]) shift += e.value * maps[static_cast<std::size_t>(e.col)].offset;
    senses[i] = lp.senses[i];
    b[i] = lp.rhs[i] - shift;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    senses[m0 + k] = Sense::LessEqual;
    b[m0 + k] = bound_rows[k].second;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      if (senses[i] == Sense::LessEqual) senses[i] = Sense::GreaterEqual;
      else if (senses[i] == Sense::GreaterEqual) senses[i] = Sense::LessEqual;
    }
  }

  detail::DenseTableau tab(m, n_struct);
  for (std::size_t j = 0; j < n_struct; ++j) tab.add_column(ColumnKind::Structural);
  std::vector<int> identity_col(m), surplus_col(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (senses[i] == Sense::LessEqual) {
      identity_col[i] = tab.add_column(ColumnKind::Slack);
    } else {
      if (senses[i] == Sense::GreaterEqual) surplus_col[i] = tab.add_column(ColumnKind::Slack);
      identity_col[i] = tab.add_column(ColumnKind::Artificial);
    }
  }
  tab.allocate();
  for (std::size_t i = 0; i < m0; ++i) {
    for (const auto& e : lp.rows[i]) {
      const auto& map = maps[static_cast<std::size_t>(e.col)];
      if (map.primary >= 0) tab.at(i, static_cast<std::size_t>(map.primary)) += flip[i] * map.sign * e.value;
      if (map.negative >= 0) tab.at(i, static_cast<std::size_t>(map.negative)) -= flip[i] * e.value;
    }
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    tab.at(m0 + k, static_cast<std::size_t>(bound_rows[k].first)) = flip[m0 + k];
  }
  for (std::size_t i = 0; i < m; ++i) {
    tab.at(i, static_cast<std::size_t>(identity_col[i])) = 1.0;
    if (surplus_col[i] >= 0) tab.at(i, static_cast<std::size_t>(surplus_col[i])) = -1.0;
    tab.rhs(i) = b[i];
    tab.set_basic(i, identity_col[i]);
  }

  // Phase 1: drive artificials to zero.
  std::vector<double> phase_costs(tab.cols(), 0.0);
  bool any_artificial = false;
  for (std::size_t j = 0; j < tab.cols(); ++j) {
    if (tab.kind(j) == ColumnKind::Artificial) {
      phase_costs[j] = 1.0;
      any_artificial = true;
    }
  }
  if (any_artificial) {
    tab.price(phase_costs);
    tab.iterate(true, opts.max_iterations);
    double bmax = 1.0;
    for (double v : b) bmax = std::max(bmax, v);
    if (tab.objective() > opts.feasibility_tol * bmax) {
      sol.status = Status::Infeasible;
      sol.iterations = tab.iterations();
      return sol;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.kind(static_cast<std::size_t>(tab.basic(i))) != ColumnKind::Artificial) continue;
      int best = -1;
      double best_abs = detail::DenseTableau::kPivotTol;
      for (std::size_t j = 0; j < tab.cols(); ++j) {
        if (tab.kind(j) == ColumnKind::Artificial) continue;
        if (std::abs(tab.at(i, j)) > best_abs) {
          best_abs = std::abs(tab.at(i, j));
          best = static_cast<int>(j);
        }
      }
      if (best >= 0) {
        tab.rhs(i) = 0.0;
        tab.pivot(i, static_cast<std::size_t>(best));
      }
    }
  }

  // Phase 2.
  std::fill(phase_costs.begin(), phase_costs.end(), 0.0);
  for (std::size_t j = 0; j < n_struct; ++j) phase_costs[j] = costs[j];
  tab.price(phase_costs);
  auto outcome = tab.iterate(false, opts.max_iterations);
  sol.iterations = tab.iterations();
  if (outcome == detail::DenseTableau::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  std::vector<double> xt(tab.cols(), 0.0);
  for (std::size_t i = 0; i < m; ++i) xt[static_cast<std::size_t>(tab.basic(i))] = std::max(tab.rhs(i), 0.0);
  sol.values.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& map = maps[j];
    double v = map.offset;
    if (map.primary >= 0) v += map.sign * xt[static_cast<std::size_t>(map.primary)];
    if (map.negative >= 0) v -= xt[static_cast<std::size_t>(map.negative)];
    sol.values[j] = v;
  }
  sol.objective = lp.objective_constant;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.values[j];
  sol.duals.assign(m0, 0.0);
  for (std::size_t i = 0; i < m0; ++i) {
    double y = -tab.reduced_cost(static_cast<std::size_t>(identity_col[i]));
    sol.duals[i] = (y == 0.0 ? 0.0 : y * flip[i]);
  }
  sol.status = Status::Optimal;
  return sol;
}

inline Solution simplex_solve(const StandardFormLP& lp, const SolverOptions& opts = {}) {
  return simplex_solve(lp, opts, lp.lower, lp.upper);
}

}  // namespace gridopt::solver
