#pragma once

#include <string>
#include <vector>

#include "gridopt/core/model.hpp"
#include "gridopt/core/module.hpp"
#include "gridopt/financials.hpp"
#include "gridopt/modules/common.hpp"
#include "gridopt/timescales.hpp"

namespace gridopt::modules {

// periods.csv, timeseries.csv, timepoints.csv. A sampling that misses the
// period length by more than `timescale_tolerance` is reported as a warning.
class TimescalesModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kTimescales, kDefineArguments | kLoadInputs}; }

  void define_arguments(Options& options) override {
    options.declare("timescale_tolerance", "0.005", "relative tolerance on hours represented per period");
  }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    ctx.data.timescales = TimescaleSet::load(source);
    auto report = validate_timescales(*ctx.data.timescales, ctx.options.real("timescale_tolerance"));
    for (const auto& c : report.periods) {
      if (c.pass) continue;
      char buf[200];
      std::snprintf(buf, sizeof buf, "period %s represents %.6g h, deviation %.5f from its length", c.period.c_str(),
                    c.represented_hours, c.deviation);
      ctx.warnings.push_back(buf);
    }
  }
};

// financials.csv: base_financial_year, discount_rate, interest_rate.
class FinancialsModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kFinancials, kLoadInputs}; }

  void load_inputs(const io::TableSource& source, ModuleContext& ctx) override {
    ctx.data.financials = FinancialParams::load(source);
    if (ctx.data.timescales) {
      for (const auto& p : ctx.data.timescales->periods()) (void)period_discount_factor(*ctx.data.financials, p);
    }
  }
};

// One row per registered cost component and period, recomputed from the solution.
struct CostLine {
  std::string component;
  std::string period;
  double annual = 0.0;
  double discount_factor = 0.0;
  double npv = 0.0;
};

inline std::vector<CostLine> cost_breakdown(const ModelGraph& model, const TimescaleSet& ts,
                                            const FinancialParams& fin, const solver::Solution& sol) {
  std::vector<CostLine> out;
  for (std::size_t p = 0; p < ts.periods().size(); ++p) {
    const auto& period = ts.periods()[p];
    const double df = period_discount_factor(fin, period);
    for (const auto& name : model.registry().names(ComponentKind::CostPerPeriod)) {
      double annual = sol.evaluate(model.family_value(name, {period.label}));
      out.push_back({name, period.label, annual, df, annual * df});
    }
    for (const auto& name : model.registry().names(ComponentKind::CostPerTimepoint)) {
      double annual = 0.0;
      for (auto tp : ts.timepoints_in_period(p)) {
        annual += sol.evaluate(model.family_value(name, {tp_id(ts, tp)})) * ts.weight(tp) / period.length_years;
      }
      out.push_back({name, period.label, annual, df, annual * df});
    }
  }
  return out;
}

// costs_by_component.csv: component, period, annual_cost, discount_factor, npv.
class ReportingModule : public Module {
 public:
  ModuleDescriptor descriptor() const override { return {name::kReporting, kPostSolve}; }

  void post_solve(const ModelGraph& model, const ModuleContext& ctx, const solver::Solution& sol,
                  std::vector<OutputTable>& out) override {
    if (!ctx.data.financials) return;
    OutputTable t{"costs_by_component", {"component", "period", "annual_cost", "discount_factor", "npv"}, {}};
    for (const auto& c : cost_breakdown(model, ctx.ts(), *ctx.data.financials, sol)) {
      t.add({c.component, c.period, exact(c.annual), exact(c.discount_factor), exact(c.npv)});
    }
    out.push_back(std::move(t));
  }

  // Round-trippable number for the reconciliation table.
  static std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
  }
};

}  // namespace gridopt::modules
