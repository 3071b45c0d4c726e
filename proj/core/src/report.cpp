#include "pitplan/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "text_util.hpp"

namespace pitplan {

namespace {

ReplaySeries make_series(std::string label, std::vector<double> cash_flows, double d) {
  ReplaySeries s;
  s.label = std::move(label);
  s.cash_flows = std::move(cash_flows);
  double discount = 1.0;
  for (double cf : s.cash_flows) {
    s.total_profit += cf;
    s.total_npv += cf / discount;
    discount *= 1.0 + d;
  }
  return s;
}

}  // namespace

std::vector<double> replay(const Schedule& schedule, const UnitGraph& units, const BlockModel& member,
                           const Calendar& calendar, const EconomicModel& econ) {
  for (const StageBenchUnit& unit : units.units)
    for (int b : unit.blocks)
      if (b < 0 || b >= static_cast<int>(member.blocks.size()))
        throw std::runtime_error("member geometry does not match the schedule's model");
  const std::vector<MiningStep> plan = schedule.mining_plan();
  return replay_plan(plan, units, member, calendar, econ, schedule.stockpiling).cash_flows();
}

ReplayResult replay_ensemble(const Schedule& schedule, const UnitGraph& units, const Ensemble& ensemble,
                             const BlockModel& aggregate_model, const Calendar& calendar,
                             const EconomicModel& econ) {
  ReplayResult result;
  result.discount_rate = econ.discount_rate;
  result.aggregate =
      make_series("aggregate", replay(schedule, units, aggregate_model, calendar, econ), econ.discount_rate);
  for (int m = 0; m < ensemble.size(); ++m) {
    const BlockModel& member = ensemble.members[static_cast<size_t>(m)];
    if (!member.same_geometry(aggregate_model))
      throw std::runtime_error("ensemble member " + std::to_string(m) +
                               " geometry does not match the aggregate");
    char label[32];
    std::snprintf(label, sizeof(label), "member_%02d", m);
    result.members.push_back(
        make_series(label, replay(schedule, units, member, calendar, econ), econ.discount_rate));
  }
  return result;
}

PeriodStats period_stats(const ReplayResult& results) {
  if (results.members.empty()) throw std::runtime_error("period_stats needs at least one member");
  const int t_max = results.t_max();
  const double n = static_cast<double>(results.members.size());
  PeriodStats stats;
  for (int t = 0; t < t_max; ++t) {
    double lo = results.members[0].cash_flows[static_cast<size_t>(t)];
    double hi = lo, sum = 0.0;
    for (const ReplaySeries& m : results.members) {
      const double v = m.cash_flows[static_cast<size_t>(t)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const ReplaySeries& m : results.members) {
      const double d = m.cash_flows[static_cast<size_t>(t)] - mean;
      var += d * d;
    }
    stats.max.push_back(hi);
    stats.min.push_back(lo);
    stats.mean.push_back(mean);
    stats.std_dev.push_back(std::sqrt(var / n));
  }
  return stats;
}

namespace {

std::vector<double> rnpv_of(const std::vector<double>& cash_flows, double d) {
  std::vector<double> rnpv(cash_flows.size(), 0.0);
  double next = 0.0;  // RNPV(t_max + 1)
  for (size_t t = cash_flows.size(); t-- > 0;) {
    next = cash_flows[t] + next / (1.0 + d);
    rnpv[t] = next;
  }
  return rnpv;
}

}  // namespace

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::runtime_error("quantile of empty set");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

RemainingNpvSeries remaining_npv(const ReplayResult& results, double d) {
  if (d < 0.0) throw std::runtime_error("discount rate must be >= 0");
  RemainingNpvSeries out;
  out.aggregate_series = rnpv_of(results.aggregate.cash_flows, d);
  for (const ReplaySeries& m : results.members) out.by_member.push_back(rnpv_of(m.cash_flows, d));
  const int t_max = results.t_max();
  for (int t = 0; t < t_max; ++t) {
    std::vector<double> vals;
    for (const auto& series : out.by_member) vals.push_back(series[static_cast<size_t>(t)]);
    if (vals.empty()) vals.push_back(out.aggregate_series[static_cast<size_t>(t)]);
    out.min.push_back(quantile(vals, 0.0));
    out.q1.push_back(quantile(vals, 0.25));
    out.median.push_back(quantile(vals, 0.5));
    out.q3.push_back(quantile(vals, 0.75));
    out.max.push_back(quantile(vals, 1.0));
  }
  return out;
}

Summary summary(const ReplayResult& results) {
  if (results.members.empty()) throw std::runtime_error("summary needs at least one member");
  Summary s;
  double lo = results.members[0].total_profit, hi = lo;
  for (const ReplaySeries& m : results.members) {
    s.average_npv += m.total_npv;
    lo = std::min(lo, m.total_profit);
    hi = std::max(hi, m.total_profit);
  }
  s.average_npv /= static_cast<double>(results.members.size());
  s.total_profit_range = hi - lo;
  return s;
}

void write_profit_by_member(const ReplayResult& results, const std::string& path) {
  auto out = detail::open_out(path);
  out << "period,member,cashflow\n";
  auto emit = [&](const ReplaySeries& s) {
    for (size_t t = 0; t < s.cash_flows.size(); ++t)
      out << (t + 1) << ',' << s.label << ',' << detail::fmt(s.cash_flows[t]) << "\n";
  };
  emit(results.aggregate);
  for (const ReplaySeries& m : results.members) emit(m);
}

void write_period_stats(const PeriodStats& stats, const std::string& path) {
  auto out = detail::open_out(path);
  out << "period,max,min,mean,std\n";
  for (size_t t = 0; t < stats.max.size(); ++t)
    out << (t + 1) << ',' << detail::fmt(stats.max[t]) << ',' << detail::fmt(stats.min[t]) << ','
        << detail::fmt(stats.mean[t]) << ',' << detail::fmt(stats.std_dev[t]) << "\n";
}

void write_remaining_npv(const RemainingNpvSeries& rnpv, const ReplayResult& results,
                         const std::string& path) {
  auto out = detail::open_out(path);
  out << "period,member,rnpv\n";
  for (size_t t = 0; t < rnpv.aggregate_series.size(); ++t)
    out << (t + 1) << ",aggregate," << detail::fmt(rnpv.aggregate_series[t]) << "\n";
  for (size_t m = 0; m < rnpv.by_member.size(); ++m)
    for (size_t t = 0; t < rnpv.by_member[m].size(); ++t)
      out << (t + 1) << ',' << results.members[m].label << ',' << detail::fmt(rnpv.by_member[m][t])
          << "\n";
}

void write_remaining_npv_quantiles(const RemainingNpvSeries& rnpv, const std::string& path) {
  auto out = detail::open_out(path);
  out << "period,min,q1,median,q3,max\n";
  for (size_t t = 0; t < rnpv.min.size(); ++t)
    out << (t + 1) << ',' << detail::fmt(rnpv.min[t]) << ',' << detail::fmt(rnpv.q1[t]) << ','
        << detail::fmt(rnpv.median[t]) << ',' << detail::fmt(rnpv.q3[t]) << ','
        << detail::fmt(rnpv.max[t]) << "\n";
}

void write_summary(const Summary& s, const std::string& path) {
  auto out = detail::open_out(path);
  out << "average_npv=" << detail::fmt(s.average_npv) << "\n";
  out << "total_profit_range=" << detail::fmt(s.total_profit_range) << "\n";
}

std::string format_money(double v) {
  const bool negative = v < 0.0;
  const double mag = std::fabs(v);
  double scaled = mag;
  const char* suffix = "";
  if (mag >= 1e9) {
    scaled = mag / 1e9;
    suffix = "B";
  } else if (mag >= 1e6) {
    scaled = mag / 1e6;
    suffix = "M";
  } else if (mag >= 1e3) {
    scaled = mag / 1e3;
    suffix = "k";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", scaled);
  std::string body(buf);
  // %.4g may emit exponent form for values like 1000 after rounding; fall
  // back to a plain fixed form in that case.
  if (body.find('e') != std::string::npos || body.find('E') != std::string::npos) {
    std::snprintf(buf, sizeof(buf), "%.0f", scaled);
    body = buf;
  }
  return std::string(negative ? "-$" : "$") + body + suffix;
}

}  // namespace pitplan
