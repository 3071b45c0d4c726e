#pragma once

#include <string>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"
#include "pitplan/ensemble.hpp"
#include "pitplan/schedule.hpp"

namespace pitplan {

struct ReplaySeries {
  std::string label;               // "aggregate", "member_00", ...
  std::vector<double> cash_flows;  // per period, undiscounted
  double total_profit = 0.0;
  double total_npv = 0.0;
};

struct ReplayResult {
  ReplaySeries aggregate;
  std::vector<ReplaySeries> members;
  double discount_rate = 0.0;

  int t_max() const { return static_cast<int>(aggregate.cash_flows.size()); }
};

/// Replays the schedule's mining timing on one member, re-deriving every
/// destination decision from the member's grades and domains. On the model
/// the schedule was decoded from this reproduces its cash flows exactly.
std::vector<double> replay(const Schedule& schedule, const UnitGraph& units, const BlockModel& member,
                           const Calendar& calendar, const EconomicModel& econ);

/// Aggregate plus every member, with totals and NPVs filled in.
ReplayResult replay_ensemble(const Schedule& schedule, const UnitGraph& units, const Ensemble& ensemble,
                             const BlockModel& aggregate_model, const Calendar& calendar,
                             const EconomicModel& econ);

/// Per-period population statistics of profit across ensemble members
/// (the aggregate is the planning model, not a sample, and is excluded).
struct PeriodStats {
  std::vector<double> max, min, mean, std_dev;
};
PeriodStats period_stats(const ReplayResult& results);

/// RNPV(t) = sum_{s>=t} cf_s / (1+d)^(s-t); quantiles across members use
/// linear interpolation between order statistics.
struct RemainingNpvSeries {
  std::vector<std::vector<double>> by_member;  // [member][period]
  std::vector<double> aggregate_series;        // [period]
  std::vector<double> min, q1, median, q3, max;
};
RemainingNpvSeries remaining_npv(const ReplayResult& results, double d);

struct Summary {
  double average_npv = 0.0;         // mean of member NPVs
  double total_profit_range = 0.0;  // max - min member total (undiscounted) profit
};
Summary summary(const ReplayResult& results);

double quantile(std::vector<double> values, double p);  // linear interpolation

// Report files (schemas documented in the README).
void write_profit_by_member(const ReplayResult& results, const std::string& path);
void write_period_stats(const PeriodStats& stats, const std::string& path);
void write_remaining_npv(const RemainingNpvSeries& rnpv, const ReplayResult& results,
                         const std::string& path);
void write_remaining_npv_quantiles(const RemainingNpvSeries& rnpv, const std::string& path);
void write_summary(const Summary& s, const std::string& path);

/// "$1.59M" / "$1.585B" style, four significant digits.
std::string format_money(double v);

}  // namespace pitplan
