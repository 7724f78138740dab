#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/io/table.hpp"

namespace gridopt {

// Mean Gregorian year.
inline constexpr double kHoursPerYear = 8766.0;

struct Period {
  std::string label;
  int start_year = 0;
  double length_years = 1.0;
};

struct Timeseries {
  std::string id;
  std::string period;
  int num_timepoints = 0;
  double tp_duration_hours = 1.0;
  double scale_to_period = 1.0;  // occurrences of this series within its period
  bool wrap = true;              // position 0 follows the last position
};

struct Timepoint {
  std::string id;
  std::string timeseries;
  int position = 0;
  std::string timestamp_label;
};

struct PeriodCoverage {
  std::string period;
  double represented_hours = 0.0;
  double expected_hours = 0.0;
  double deviation = 0.0;  // relative
  bool pass = false;
};

struct TimescaleReport {
  std::vector<PeriodCoverage> periods;
  bool pass = true;
};

// Validated periods, timeseries and timepoints with precomputed lookups.
// Indices into periods()/series()/timepoints() are stable for the set's life.
class TimescaleSet {
 public:
  static TimescaleSet build(std::vector<Period> periods, std::vector<Timeseries> series,
                            std::vector<Timepoint> timepoints) {
    TimescaleSet set;
    std::stable_sort(periods.begin(), periods.end(),
                     [](const Period& a, const Period& b) { return a.start_year < b.start_year; });
    for (std::size_t i = 0; i < periods.size(); ++i) {
      const auto& p = periods[i];
      if (!(p.length_years > 0)) fail(ErrorKind::InputError, "period " + p.label + " has non-positive length");
      if (set.period_index_.contains(p.label)) fail(ErrorKind::Duplicate, "period " + p.label);
      if (i > 0 && periods[i - 1].start_year + periods[i - 1].length_years > p.start_year + 1e-9) {
        fail(ErrorKind::InputError, "period " + p.label + " overlaps period " + periods[i - 1].label);
      }
      set.period_index_[p.label] = i;
    }
    set.periods_ = std::move(periods);
    set.series_in_period_.resize(set.periods_.size());
    set.tps_in_period_.resize(set.periods_.size());

    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto& s = series[i];
      auto pit = set.period_index_.find(s.period);
      if (pit == set.period_index_.end()) {
        fail(ErrorKind::OrphanTimeseries, "timeseries " + s.id + " names unknown period " + s.period);
      }
      if (s.num_timepoints <= 0 || !(s.tp_duration_hours > 0) || !(s.scale_to_period > 0)) {
        fail(ErrorKind::InputError, "timeseries " + s.id + " needs positive count, duration and scale");
      }
      if (set.series_index_.contains(s.id)) fail(ErrorKind::Duplicate, "timeseries " + s.id);
      set.series_index_[s.id] = i;
      set.series_period_.push_back(pit->second);
      set.series_in_period_[pit->second].push_back(i);
    }
    set.series_ = std::move(series);
    set.tps_in_series_.assign(set.series_.size(), std::vector<std::size_t>{});

    std::vector<std::vector<std::pair<int, std::size_t>>> positions(set.series_.size());
    for (std::size_t i = 0; i < timepoints.size(); ++i) {
      const auto& tp = timepoints[i];
      auto sit = set.series_index_.find(tp.timeseries);
      if (sit == set.series_index_.end()) {
        fail(ErrorKind::OrphanTimepoint, "timepoint " + tp.id + " names unknown timeseries " + tp.timeseries);
      }
      if (set.tp_index_.contains(tp.id)) fail(ErrorKind::Duplicate, "timepoint " + tp.id);
      set.tp_index_[tp.id] = i;
      positions[sit->second].push_back({tp.position, i});
    }
    set.timepoints_ = std::move(timepoints);
    set.tp_series_.resize(set.timepoints_.size());
    for (std::size_t s = 0; s < set.series_.size(); ++s) {
      auto& pos = positions[s];
      std::sort(pos.begin(), pos.end());
      if (static_cast<int>(pos.size()) != set.series_[s].num_timepoints) {
        fail(ErrorKind::NonContiguousPositions,
             "timeseries " + set.series_[s].id + " declares " + std::to_string(set.series_[s].num_timepoints) +
                 " timepoints but has " + std::to_string(pos.size()));
      }
      for (std::size_t k = 0; k < pos.size(); ++k) {
        if (pos[k].first != static_cast<int>(k)) {
          fail(ErrorKind::NonContiguousPositions,
               "timeseries " + set.series_[s].id + " positions are not 0.." +
                   std::to_string(pos.size() - 1));
        }
        set.tps_in_series_[s].push_back(pos[k].second);
        set.tp_series_[pos[k].second] = s;
      }
    }
    // Timepoints of a period follow series order, then position.
    for (std::size_t p = 0; p < set.periods_.size(); ++p) {
      for (auto s : set.series_in_period_[p]) {
        for (auto tp : set.tps_in_series_[s]) set.tps_in_period_[p].push_back(tp);
      }
    }
    return set;
  }

  static TimescaleSet load(const io::TableSource& source) {
    for (const char* name : {"periods", "timeseries", "timepoints"}) {
      if (!source.has(name)) {
        fail(ErrorKind::MissingInput, "module timescales requires " + source.describe(name));
      }
    }
    std::vector<Period> periods;
    auto pt = source.get("periods");
    for (std::size_t r = 0; r < pt.size(); ++r) {
      periods.push_back({pt.text(r, "period"), static_cast<int>(pt.integer(r, "start_year")),
                         pt.real(r, "length_years")});
    }
    std::vector<Timeseries> series;
    auto st = source.get("timeseries");
    for (std::size_t r = 0; r < st.size(); ++r) {
      series.push_back({st.text(r, "timeseries"), st.text(r, "period"),
                        static_cast<int>(st.integer(r, "num_timepoints")), st.real(r, "tp_duration_hours"),
                        st.real(r, "scale_to_period"), st.flag_or(r, "wrap", true)});
    }
    std::vector<Timepoint> tps;
    auto tt = source.get("timepoints");
    for (std::size_t r = 0; r < tt.size(); ++r) {
      tps.push_back({tt.text(r, "timepoint"), tt.text(r, "timeseries"), static_cast<int>(tt.integer(r, "position")),
                     tt.has_column("timestamp") ? tt.text(r, "timestamp") : tt.text(r, "timepoint")});
    }
    return build(std::move(periods), std::move(series), std::move(tps));
  }

  const std::vector<Period>& periods() const { return periods_; }
  const std::vector<Timeseries>& series() const { return series_; }
  const std::vector<Timepoint>& timepoints() const { return timepoints_; }

  std::size_t period_index(const std::string& label) const { return lookup(period_index_, label, "period"); }
  std::size_t series_index(const std::string& id) const { return lookup(series_index_, id, "timeseries"); }
  std::size_t timepoint_index(const std::string& id) const { return lookup(tp_index_, id, "timepoint"); }
  bool has_period(const std::string& label) const { return period_index_.contains(label); }
  bool has_timepoint(const std::string& id) const { return tp_index_.contains(id); }
  bool has_series(const std::string& id) const { return series_index_.contains(id); }

  const std::vector<std::size_t>& timepoints_in_period(std::size_t p) const { return tps_in_period_.at(p); }
  const std::vector<std::size_t>& series_in_period(std::size_t p) const { return series_in_period_.at(p); }
  const std::vector<std::size_t>& timepoints_in_series(std::size_t s) const { return tps_in_series_.at(s); }

  std::size_t series_of(std::size_t tp) const { return tp_series_.at(tp); }
  std::size_t period_of_series(std::size_t s) const { return series_period_.at(s); }
  std::size_t period_of(std::size_t tp) const { return series_period_.at(tp_series_.at(tp)); }
  double duration(std::size_t tp) const { return series_[series_of(tp)].tp_duration_hours; }

  // Hours of the period represented by one timepoint.
  double weight(std::size_t tp) const {
    const auto& s = series_[series_of(tp)];
    return s.tp_duration_hours * s.scale_to_period;
  }

  // Predecessor inside the series; position 0 wraps to the last position
  // unless wrapping is disabled for the series.
  std::optional<std::size_t> predecessor(std::size_t tp) const {
    auto s = series_of(tp);
    const auto& members = tps_in_series_[s];
    auto pos = static_cast<std::size_t>(timepoints_[tp].position);
    if (pos > 0) return members[pos - 1];
    if (!series_[s].wrap) return std::nullopt;
    return members.back();
  }

  // Timepoint k steps back in the series, following the wrap convention.
  std::optional<std::size_t> back(std::size_t tp, std::size_t steps) const {
    std::optional<std::size_t> cur = tp;
    for (std::size_t i = 0; i < steps && cur; ++i) cur = predecessor(*cur);
    return cur;
  }

  double represented_hours(std::size_t p) const {
    double total = 0.0;
    for (auto s : series_in_period_.at(p)) {
      total += series_[s].scale_to_period * series_[s].num_timepoints * series_[s].tp_duration_hours;
    }
    return total;
  }

  double series_hours(std::size_t s) const { return series_[s].num_timepoints * series_[s].tp_duration_hours; }

 private:
  static std::size_t lookup(const std::map<std::string, std::size_t>& index, const std::string& key,
                            const char* what) {
    auto it = index.find(key);
    if (it == index.end()) fail(ErrorKind::IntegrityError, std::string("unknown ") + what + " '" + key + "'");
    return it->second;
  }

  std::vector<Period> periods_;
  std::vector<Timeseries> series_;
  std::vector<Timepoint> timepoints_;
  std::map<std::string, std::size_t> period_index_, series_index_, tp_index_;
  std::vector<std::size_t> series_period_;
  std::vector<std::size_t> tp_series_;
  std::vector<std::vector<std::size_t>> series_in_period_, tps_in_period_, tps_in_series_;
};

inline double timepoint_weight(const TimescaleSet& set, std::size_t tp) { return set.weight(tp); }

// Compares represented hours with length_years * 8766 for every period.
inline TimescaleReport validate_timescales(const TimescaleSet& set, double tolerance) {
  if (!(tolerance > 0)) fail(ErrorKind::InputError, "tolerance must be positive");
  TimescaleReport report;
  for (std::size_t p = 0; p < set.periods().size(); ++p) {
    PeriodCoverage c;
    c.period = set.periods()[p].label;
    c.represented_hours = set.represented_hours(p);
    c.expected_hours = set.periods()[p].length_years * kHoursPerYear;
    c.deviation = std::abs(c.represented_hours - c.expected_hours) / c.expected_hours;
    c.pass = c.deviation <= tolerance;
    report.pass = report.pass && c.pass;
    report.periods.push_back(c);
  }
  return report;
}

}  // namespace gridopt
