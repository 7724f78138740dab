#pragma once

#include <cmath>
#include <string>

#include "gridopt/core/error.hpp"
#include "gridopt/core/model.hpp"
#include "gridopt/io/table.hpp"
#include "gridopt/timescales.hpp"

namespace gridopt {

struct FinancialParams {
  int base_financial_year = 2020;
  double discount_rate = 0.0;  // annual, real terms
  double interest_rate = 0.0;  // for capital recovery

  void validate() const {
    if (!(discount_rate >= 0 && discount_rate < 1) || !(interest_rate >= 0 && interest_rate < 1)) {
      fail(ErrorKind::InputError, "financial rates must lie in [0, 1)");
    }
  }

  static FinancialParams load(const io::TableSource& source) {
    if (!source.has("financials")) {
      fail(ErrorKind::MissingInput, "module financials requires " + source.describe("financials"));
    }
    auto t = source.get("financials");
    if (t.size() != 1) fail(ErrorKind::InputError, "financials.csv must contain exactly one row");
    FinancialParams p{static_cast<int>(t.integer(0, "base_financial_year")), t.real(0, "discount_rate"),
                      t.real_or(0, "interest_rate", t.real(0, "discount_rate"))};
    p.validate();
    return p;
  }
};

// Capital recovery factor: annual payment per unit of overnight cost.
inline double crf(double rate, int life_years) {
  if (life_years < 1 || rate < 0) fail(ErrorKind::InputError, "crf needs life >= 1 and rate >= 0");
  if (rate == 0.0) return 1.0 / life_years;
  double growth = std::pow(1.0 + rate, life_years);
  return rate * growth / (growth - 1.0);
}

// Present value at the base year of 1 $/yr paid at the start of each year of
// the period.
inline double period_discount_factor(const FinancialParams& params, const Period& period) {
  if (period.start_year < params.base_financial_year) {
    fail(ErrorKind::InputError, "period " + period.label + " starts before the base financial year");
  }
  double total = 0.0;
  int years = static_cast<int>(std::lround(period.length_years));
  for (int k = 0; k < years; ++k) {
    total += std::pow(1.0 + params.discount_rate, -(period.start_year + k - params.base_financial_year));
  }
  return total;
}

// NPV objective from the registered cost components. Period components are
// annual costs; timepoint components are $/h flows that are weighted to a
// period total, spread evenly over the period's years and then discounted.
inline LinearExpression build_objective(const ModelGraph& model, const TimescaleSet& ts,
                                        const FinancialParams& params) {
  ExpressionBuilder objective;
  const auto& period_costs = model.registry().names(ComponentKind::CostPerPeriod);
  const auto& tp_costs = model.registry().names(ComponentKind::CostPerTimepoint);
  for (const auto& name : period_costs) (void)model.family(name);
  for (const auto& name : tp_costs) (void)model.family(name);

  for (std::size_t p = 0; p < ts.periods().size(); ++p) {
    const auto& period = ts.periods()[p];
    double df = period_discount_factor(params, period);
    for (const auto& name : period_costs) {
      objective.add(model.family_value(name, {period.label}), df);
    }
    for (auto tp : ts.timepoints_in_period(p)) {
      double k = df * ts.weight(tp) / period.length_years;
      for (const auto& name : tp_costs) {
        objective.add(model.family_value(name, {ts.timepoints()[tp].id}), k);
      }
    }
  }
  return objective.build();
}

}  // namespace gridopt
