#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridopt/core/model.hpp"

namespace gridopt::solver {

struct RowEntry {
  std::int32_t col = 0;
  double value = 0.0;

  bool operator==(const RowEntry&) const = default;
};

// Flat LP/MILP: minimize c'x + constant subject to rows and column bounds.
// Column order is variable creation order in the ModelGraph, row order is
// constraint creation order.
struct StandardFormLP {
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<std::vector<RowEntry>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<std::string> col_names;
  std::vector<std::string> row_names;
  std::unordered_map<std::string, std::int32_t> col_lookup;
  std::unordered_map<std::string, std::int32_t> row_lookup;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_cols() const { return objective.size(); }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
  }

  bool has_integers() const {
    for (bool b : integer) if (b) return true;
    return false;
  }

  // Builder helpers, mostly for tests and hand-written instances.
  std::int32_t add_column(const std::string& name, double cost, double lo = 0.0, double hi = kInf,
                          bool is_integer = false) {
    auto id = static_cast<std::int32_t>(objective.size());
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    integer.push_back(is_integer);
    col_names.push_back(name);
    col_lookup.emplace(name, id);
    return id;
  }

  std::int32_t add_row(const std::string& name, std::vector<RowEntry> entries, Sense sense, double b) {
    auto id = static_cast<std::int32_t>(rows.size());
    rows.push_back(std::move(entries));
    senses.push_back(sense);
    rhs.push_back(b);
    row_names.push_back(name);
    row_lookup.emplace(name, id);
    return id;
  }

  std::int32_t column(const std::string& name) const {
    auto it = col_lookup.find(name);
    return it == col_lookup.end() ? -1 : it->second;
  }
};

inline StandardFormLP to_standard_form(const ModelGraph& model) {
  StandardFormLP lp;
  const auto& vars = model.variables();
  lp.objective.assign(vars.size(), 0.0);
  lp.lower.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    lp.lower.push_back(vars[j].lower);
    lp.upper.push_back(vars[j].upper);
    lp.integer.push_back(vars[j].integrality == Integrality::Integer);
    lp.col_names.push_back(vars[j].name);
    lp.col_lookup.emplace(vars[j].name, static_cast<std::int32_t>(j));
  }
  for (const auto& t : model.objective().terms()) lp.objective[static_cast<std::size_t>(t.var.index)] = t.coef;
  lp.objective_constant = model.objective().constant();
  for (const auto& c : model.constraints()) {
    std::vector<RowEntry> entries;
    entries.reserve(c.expression.size());
    for (const auto& t : c.expression.terms()) entries.push_back({t.var.index, t.coef});
    lp.add_row(c.name, std::move(entries), c.sense, c.rhs);
  }
  return lp;
}

}  // namespace gridopt::solver
