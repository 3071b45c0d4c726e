#pragma once

#include <string>
#include <vector>

#include "pitplan/ensemble.hpp"
#include "pitplan/evolve.hpp"
#include "pitplan/report.hpp"
#include "pitplan/shells.hpp"
#include "pitplan/staging.hpp"

namespace pitplan {

/// One staging strategy taken through stage -> optimize -> ensemble replay.
struct StrategyRun {
  std::string name;  // lazy, expected, worst_case, levelled
  Staging staging;
  EvolveResult optimized;
  ReplayResult replay;
  Summary totals;
};

struct CompareConfig {
  int k_stages = 6;
  double std_threshold = 0.01;
  EAConfig ea;
  bool stockpiling = true;
  std::vector<double> revenue_factors = default_revenue_factors();
  std::string expected_staging_path;  // optional engineer-supplied staging
};

struct CompareResult {
  ShellAssignment shells;
  std::vector<StrategyRun> runs;

  const StrategyRun* run(const std::string& name) const;
};

/// The full experimental protocol on a prepared ensemble: ultimate pit and
/// shells on the aggregate, then every staging strategy scheduled with the
/// same EA configuration and replayed across the ensemble.
CompareResult compare_strategies(const BlockModel& aggregate_model, const Ensemble& ensemble,
                                 const PrecedenceGraph& precedence, const Calendar& calendar,
                                 const EconomicModel& econ, const CompareConfig& config);

/// Side-by-side bullet lines, one per strategy:
/// "Lazy staging: average NPV of $..., total profit range of $...".
std::string compare_bullets(const CompareResult& result);

}  // namespace pitplan
