#include "pitplan/pipeline.hpp"

#include <stdexcept>

namespace pitplan {

const StrategyRun* CompareResult::run(const std::string& name) const {
  for (const StrategyRun& r : runs)
    if (r.name == name) return &r;
  return nullptr;
}

CompareResult compare_strategies(const BlockModel& aggregate_model, const Ensemble& ensemble,
                                 const PrecedenceGraph& precedence, const Calendar& calendar,
                                 const EconomicModel& econ, const CompareConfig& config) {
  const UncertaintyField uncertainty = uncertainty_field(ensemble, aggregate_model);

  CompareResult result;
  result.shells = nested_shells(aggregate_model, econ, precedence, config.revenue_factors);
  if (result.shells.pit_blocks().empty())
    throw std::runtime_error("ultimate pit is empty; nothing to stage or schedule");

  struct Planned {
    std::string name;
    Staging staging;
  };
  std::vector<Planned> planned;
  planned.push_back({"lazy", lazy_staging(aggregate_model, result.shells, config.k_stages)});
  if (!config.expected_staging_path.empty()) {
    const std::vector<int> pit = result.shells.pit_blocks();
    planned.push_back(
        {"expected", load_staging(config.expected_staging_path, aggregate_model, pit)});
  }
  planned.push_back({"worst_case", worst_case_staging(aggregate_model, result.shells, uncertainty, econ,
                                                      config.k_stages, config.std_threshold)});
  planned.push_back(
      {"levelled", levelled_staging(aggregate_model, result.shells, uncertainty, econ, config.k_stages)});

  for (Planned& p : planned) {
    StrategyRun run;
    run.name = p.name;
    run.staging = std::move(p.staging);
    const UnitGraph units = build_units(aggregate_model, run.staging, precedence);
    run.optimized = evolve(units, aggregate_model, calendar, econ, config.stockpiling, config.ea);
    run.replay =
        replay_ensemble(run.optimized.schedule, units, ensemble, aggregate_model, calendar, econ);
    run.totals = summary(run.replay);
    result.runs.push_back(std::move(run));
  }
  return result;
}

std::string compare_bullets(const CompareResult& result) {
  auto label = [](const std::string& name) -> std::string {
    if (name == "lazy") return "Lazy staging";
    if (name == "expected") return "Expected staging";
    if (name == "worst_case") return "Worst case";
    if (name == "levelled") return "Levelled uncertainty staging";
    return name;
  };
  std::string out;
  for (const StrategyRun& run : result.runs) {
    out += label(run.name) + ": average NPV of " + format_money(run.totals.average_npv) +
           ", total profit range of " + format_money(run.totals.total_profit_range) + ".\n";
  }
  return out;
}

}  // namespace pitplan
