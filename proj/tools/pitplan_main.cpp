// pitplan command line: synthetic deposits, interpolation ensembles, pit
// optimization, staging, evolutionary scheduling and ensemble replay reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pitplan/ensemble.hpp"
#include "pitplan/evolve.hpp"
#include "pitplan/io.hpp"
#include "pitplan/network.hpp"
#include "pitplan/pipeline.hpp"
#include "pitplan/report.hpp"
#include "pitplan/schedule.hpp"
#include "pitplan/shells.hpp"
#include "pitplan/staging.hpp"
#include "pitplan/synthetic.hpp"

namespace {

using namespace pitplan;

GridDims parse_dims(const std::string& text) {
  GridDims d;
  if (std::sscanf(text.c_str(), "%dx%dx%d", &d.nx, &d.ny, &d.nz) != 3 || d.nx <= 0 || d.ny <= 0 ||
      d.nz <= 0)
    throw CLI::ValidationError("--dims", "expected positive NXxNYxNZ, got '" + text + "'");
  return d;
}

SlopePattern parse_pattern(const std::string& text) {
  if (text == "five") return SlopePattern::FivePoint;
  if (text == "nine") return SlopePattern::NinePoint;
  throw CLI::ValidationError("--pattern", "expected 'five' or 'nine', got '" + text + "'");
}

bool parse_on_off(const std::string& text, const char* flag) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw CLI::ValidationError(flag, "expected 'on' or 'off', got '" + text + "'");
}

std::ofstream open_out_file(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

struct InterpFlags {
  std::string method = "idw";
  double idw_power = 3.0;
  int idw_neighbors = 10;
  double bootstrap = 0.5;
  std::string hidden = "16,16";
  double tolerance = 1e-4;
  int epochs = 2000;
  double learning_rate = 0.05;

  InterpolatorConfig to_config() const {
    InterpolatorConfig config;
    if (method == "idw") config.method = InterpolationMethod::IDW;
    else if (method == "network") config.method = InterpolationMethod::Network;
    else throw CLI::ValidationError("--method", "expected 'idw' or 'network', got '" + method + "'");
    config.idw_power = idw_power;
    config.idw_max_neighbors = idw_neighbors;
    config.bootstrap_fraction = bootstrap;
    config.net_hidden_layers.clear();
    size_t start = 0;
    while (start <= hidden.size() && !hidden.empty()) {
      const size_t comma = hidden.find(',', start);
      const std::string part = hidden.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!part.empty()) config.net_hidden_layers.push_back(std::stoi(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    config.net_fit_tolerance = tolerance;
    config.net_max_epochs = epochs;
    config.learning_rate = learning_rate;
    config.validate();
    return config;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--method", method, "Interpolator: idw or network");
    cmd->add_option("--idw-power", idw_power, "IDW distance power");
    cmd->add_option("--idw-neighbors", idw_neighbors, "IDW neighbor count");
    cmd->add_option("--bootstrap", bootstrap, "Bootstrap resample fraction in (0,1]");
    cmd->add_option("--hidden", hidden, "Network hidden layer widths, comma separated");
    cmd->add_option("--tolerance", tolerance, "Network fit tolerance (training loss)");
    cmd->add_option("--epochs", epochs, "Network max epochs");
    cmd->add_option("--lr", learning_rate, "Network learning rate");
  }
};

struct EaFlags {
  int population = 50;
  int generations = 100;
  int tournament = 3;
  double mutation_rate = 0.3;
  double crossover_rate = 0.9;
  int elitism = 2;
  std::uint64_t seed = 1;

  EAConfig to_config() const {
    EAConfig config;
    config.population_size = population;
    config.generations = generations;
    config.tournament_size = tournament;
    config.mutation_rate = mutation_rate;
    config.crossover_rate = crossover_rate;
    config.elitism_count = elitism;
    config.seed = seed;
    config.validate();
    return config;
  }

  void add_to(CLI::App* cmd, const char* seed_flag = "--seed") {
    cmd->add_option("--population", population, "Population size");
    cmd->add_option("--generations", generations, "Generations");
    cmd->add_option("--tournament", tournament, "Tournament size");
    cmd->add_option("--mutation-rate", mutation_rate, "Mutation probability");
    cmd->add_option("--crossover-rate", crossover_rate, "Crossover probability");
    cmd->add_option("--elitism", elitism, "Elite count carried over unchanged");
    cmd->add_option(seed_flag, seed, "Random seed for the optimizer");
  }
};

void write_fitness_trace(const std::vector<double>& trace, const std::string& path) {
  auto out = open_out_file(path);
  out << "generation,best_npv\n";
  char buf[64];
  for (size_t g = 0; g < trace.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "%.17g", trace[g]);
    out << g << ',' << buf << "\n";
  }
}

void write_uncertainty(const UncertaintyField& field, const BlockModel& model, const std::string& path) {
  auto out = open_out_file(path);
  out << "i,j,k,grade_std,domain_disagreement\n";
  char buf[128];
  for (size_t b = 0; b < model.blocks.size(); ++b) {
    const BlockIndex idx = model.blocks[b].index;
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g", idx.i, idx.j, idx.k, field.grade_std[b],
                  field.domain_disagreement[b]);
    out << buf << "\n";
  }
}

void write_reports(const ReplayResult& results, const EconomicModel& econ, const std::string& dir) {
  write_profit_by_member(results, dir + "/profit_by_member.csv");
  write_period_stats(period_stats(results), dir + "/period_stats.csv");
  const RemainingNpvSeries rnpv = remaining_npv(results, econ.discount_rate);
  write_remaining_npv(rnpv, results, dir + "/remaining_npv.csv");
  write_remaining_npv_quantiles(rnpv, dir + "/remaining_npv_quantiles.csv");
  write_summary(summary(results), dir + "/summary.txt");
}

// ---------------------------------------------------------------- gen

struct GenOpts {
  std::uint64_t seed = 7;
  std::string dims = "20x20x10";
  double block_size = 10.0;
  int domains = 3;
  int drillholes = 16;
  int periods = 20;
  std::string out;
};

void run_gen(const GenOpts& opts) {
  const GridDims dims = parse_dims(opts.dims);
  if (opts.domains < 1) throw CLI::ValidationError("--domains", "must be >= 1");
  if (opts.drillholes < 0) throw CLI::ValidationError("--drillholes", "must be >= 0");
  if (opts.periods < 1) throw CLI::ValidationError("--periods", "must be >= 1");
  ensure_dir(opts.out);

  const SyntheticDeposit deposit =
      generate_synthetic_deposit(opts.seed, dims, opts.block_size, opts.domains, opts.drillholes);
  save_block_model(deposit.ground_truth, opts.out + "/ground_truth.csv");
  save_samples(deposit.samples, opts.out + "/samples.csv");
  save_economics(default_economics(opts.domains), opts.out + "/economics.txt");
  save_calendar(default_calendar(deposit.ground_truth.total_tonnage(), opts.periods),
                opts.out + "/calendar.csv");
  std::cerr << "gen: wrote deposit " << opts.dims << " with " << deposit.samples.size()
            << " samples to " << opts.out << "\n";
}

// ---------------------------------------------------------------- ensemble

struct EnsembleOpts {
  std::string samples, geometry, out;
  int members = 10;
  std::uint64_t seed = 7;
  InterpFlags interp;
};

void run_ensemble(const EnsembleOpts& opts) {
  const std::vector<DrillSample> samples = load_samples(opts.samples);
  const BlockModel geometry = load_block_model(opts.geometry);
  const InterpolatorConfig config = opts.interp.to_config();
  const Ensemble ens = build_ensemble(samples, config, opts.members, opts.seed, geometry);
  const BlockModel agg = aggregate(ens);
  ensure_dir(opts.out);
  save_ensemble(ens, agg, config, opts.seed, opts.out);
  write_uncertainty(uncertainty_field(ens, agg), agg, opts.out + "/uncertainty.csv");
  std::cerr << "ensemble: " << opts.members << " members written to " << opts.out << "\n";
}

// ---------------------------------------------------------------- pit

struct PitOpts {
  std::string model, econ, out;
  std::string pattern = "nine";
  double factor_min = 0.5, factor_max = 1.5;
  int factor_count = 21;
};

void run_pit(const PitOpts& opts) {
  if (opts.factor_count < 1) throw CLI::ValidationError("--factor-count", "must be >= 1");
  const BlockModel model = load_block_model(opts.model);
  const EconomicModel econ = load_economics(opts.econ);
  const PrecedenceGraph precedence = derive_precedence(model, parse_pattern(opts.pattern));
  std::vector<double> factors;
  for (int s = 0; s < opts.factor_count; ++s)
    factors.push_back(opts.factor_count == 1
                          ? opts.factor_max
                          : opts.factor_min + (opts.factor_max - opts.factor_min) * s /
                                                  (opts.factor_count - 1));
  const ShellAssignment shells = nested_shells(model, econ, precedence, factors);
  ensure_dir(opts.out);
  save_shells(shells, model, opts.out + "/shells.csv");

  const std::vector<int> pit = shells.pit_blocks();
  if (pit.empty()) std::cerr << "warning: ultimate pit is empty\n";
  double value = 0.0;
  for (int b : pit) {
    const Block& blk = model.blocks[static_cast<size_t>(b)];
    value += std::max(block_value(blk, econ, Destination::Process),
                      block_value(blk, econ, Destination::Waste));
  }
  std::cout << "pit_blocks=" << pit.size() << "\n";
  std::cout << "pit_tonnage=" << shells.pit_tonnage(model) << "\n";
  std::cout << "pit_value=" << value << "\n";
}

// ---------------------------------------------------------------- stage

struct StageOpts {
  std::string ensemble_dir, shells, econ, out;
  std::string strategy = "lazy";
  std::string staging_file;
  int stages = 6;
  double std_threshold = 0.01;
};

void run_stage(const StageOpts& opts) {
  const LoadedEnsemble loaded = load_ensemble(opts.ensemble_dir);
  const EconomicModel econ = load_economics(opts.econ);
  const ShellAssignment shells = load_shells(opts.shells, loaded.aggregate);

  Staging staging;
  if (opts.strategy == "lazy") {
    staging = lazy_staging(loaded.aggregate, shells, opts.stages);
  } else if (opts.strategy == "worst_case") {
    staging = worst_case_staging(loaded.aggregate, shells,
                                 uncertainty_field(loaded.ensemble, loaded.aggregate), econ,
                                 opts.stages, opts.std_threshold);
  } else if (opts.strategy == "levelled") {
    staging = levelled_staging(loaded.aggregate, shells,
                               uncertainty_field(loaded.ensemble, loaded.aggregate), econ, opts.stages);
  } else if (opts.strategy == "file") {
    if (opts.staging_file.empty())
      throw CLI::ValidationError("--staging-file", "required for --strategy file");
    const std::vector<int> pit = shells.pit_blocks();
    staging = load_staging(opts.staging_file, loaded.aggregate, pit);
  } else {
    throw CLI::ValidationError("--strategy", "expected lazy, worst_case, levelled or file");
  }
  if (staging.fallback_warning)
    std::cerr << "warning: no uncertain ore blocks; worst-case staging fell back to lazy\n";
  ensure_dir(opts.out);
  save_staging(staging, loaded.aggregate, opts.out + "/staging.csv");
  std::cerr << "stage: " << staging.n_stages << " stages over " << staging.pit_blocks().size()
            << " pit blocks\n";
}

// ---------------------------------------------------------------- schedule

struct ScheduleOpts {
  std::string model, staging, calendar, econ, out;
  std::string pattern = "nine";
  std::string stockpile = "on";
  bool oracle = false;
  EaFlags ea;
};

void run_schedule(const ScheduleOpts& opts) {
  const BlockModel model = load_block_model(opts.model);
  const Calendar calendar = load_calendar(opts.calendar);
  const EconomicModel econ = load_economics(opts.econ);
  const Staging staging = load_staging(opts.staging, model);
  const PrecedenceGraph precedence = derive_precedence(model, parse_pattern(opts.pattern));
  const UnitGraph units = build_units(model, staging, precedence);
  const bool stockpiling = parse_on_off(opts.stockpile, "--stockpile");

  const EvolveResult result = evolve(units, model, calendar, econ, stockpiling, opts.ea.to_config());
  ensure_dir(opts.out);
  save_schedule(result.schedule, units, opts.out + "/schedule.csv");
  save_chromosome(result.best, opts.out + "/chromosome.txt");
  write_fitness_trace(result.trace, opts.out + "/fitness_trace.csv");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", result.best_npv);
  std::cout << "npv=" << buf << "\n";

  if (opts.oracle) {
    const auto [best, oracle_npv] = brute_force_best(units, model, calendar, econ, stockpiling);
    std::snprintf(buf, sizeof(buf), "%.17g", oracle_npv);
    std::cout << "oracle_npv=" << buf << "\n";
  }
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOpts {
  std::string schedule, ensemble_dir, staging, calendar, econ, out;
  std::string pattern = "nine";
};

void run_evaluate(const EvaluateOpts& opts) {
  const LoadedEnsemble loaded = load_ensemble(opts.ensemble_dir);
  const Calendar calendar = load_calendar(opts.calendar);
  const EconomicModel econ = load_economics(opts.econ);
  const Staging staging = load_staging(opts.staging, loaded.aggregate);
  const PrecedenceGraph precedence = derive_precedence(loaded.aggregate, parse_pattern(opts.pattern));
  const UnitGraph units = build_units(loaded.aggregate, staging, precedence);

  const LoadedSchedule sched = load_schedule(opts.schedule, units);
  const Schedule schedule =
      replay_plan(sched.plan, units, loaded.aggregate, calendar, econ, sched.stockpiling);
  const ReplayResult results =
      replay_ensemble(schedule, units, loaded.ensemble, loaded.aggregate, calendar, econ);
  ensure_dir(opts.out);
  write_reports(results, econ, opts.out);
  std::cerr << "evaluate: " << (results.members.size() + 1) << " replays over "
            << results.t_max() << " periods written to " << opts.out << "\n";
}

// ---------------------------------------------------------------- compare

struct CompareOpts {
  std::string samples, geometry, calendar, econ, out;
  std::string pattern = "nine";
  std::string stockpile = "on";
  std::string staging_file;
  int members = 10;
  std::uint64_t seed = 7;
  int stages = 6;
  double std_threshold = 0.01;
  InterpFlags interp;
  EaFlags ea;
};

void run_compare(const CompareOpts& opts) {
  const std::vector<DrillSample> samples = load_samples(opts.samples);
  const BlockModel geometry = load_block_model(opts.geometry);
  const Calendar calendar = load_calendar(opts.calendar);
  const EconomicModel econ = load_economics(opts.econ);
  const InterpolatorConfig interp = opts.interp.to_config();

  const Ensemble ens = build_ensemble(samples, interp, opts.members, opts.seed, geometry);
  const BlockModel agg = aggregate(ens);
  ensure_dir(opts.out);
  save_ensemble(ens, agg, interp, opts.seed, opts.out + "/ensemble");
  write_uncertainty(uncertainty_field(ens, agg), agg, opts.out + "/ensemble/uncertainty.csv");

  const PrecedenceGraph precedence = derive_precedence(agg, parse_pattern(opts.pattern));
  CompareConfig config;
  config.k_stages = opts.stages;
  config.std_threshold = opts.std_threshold;
  config.ea = opts.ea.to_config();
  config.stockpiling = parse_on_off(opts.stockpile, "--stockpile");
  config.expected_staging_path = opts.staging_file;
  if (opts.staging_file.empty())
    std::cerr << "note: no --staging-file given; the expected (engineer) staging is skipped\n";

  const CompareResult result = compare_strategies(agg, ens, precedence, calendar, econ, config);
  save_shells(result.shells, agg, opts.out + "/shells.csv");
  for (const StrategyRun& run : result.runs) {
    const std::string dir = opts.out + "/" + run.name;
    ensure_dir(dir);
    save_staging(run.staging, agg, dir + "/staging.csv");
    const UnitGraph units = build_units(agg, run.staging, precedence);
    save_schedule(run.optimized.schedule, units, dir + "/schedule.csv");
    save_chromosome(run.optimized.best, dir + "/chromosome.txt");
    write_fitness_trace(run.optimized.trace, dir + "/fitness_trace.csv");
    write_reports(run.replay, econ, dir);
  }
  const std::string bullets = compare_bullets(result);
  auto out = open_out_file(opts.out + "/compare_summary.txt");
  out << bullets;
  std::cout << bullets;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pitplan: open-pit mine scheduling under grade uncertainty"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic deposit and drill samples");
  gen_cmd->add_option("--seed", gen.seed, "Deposit seed");
  gen_cmd->add_option("--dims", gen.dims, "Grid dims NXxNYxNZ");
  gen_cmd->add_option("--block-size", gen.block_size, "Block edge length in meters");
  gen_cmd->add_option("--domains", gen.domains, "Number of lithological domains");
  gen_cmd->add_option("--drillholes", gen.drillholes, "Vertical drillhole count");
  gen_cmd->add_option("--periods", gen.periods, "Calendar periods to emit");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->callback([&] { run_gen(gen); });

  EnsembleOpts ens;
  CLI::App* ens_cmd = app.add_subcommand("ensemble", "Interpolate an ensemble of block models");
  ens_cmd->add_option("--samples", ens.samples, "Drill samples CSV")->required();
  ens_cmd->add_option("--geometry", ens.geometry, "Block model providing geometry/tonnage")->required();
  ens_cmd->add_option("--members", ens.members, "Ensemble size");
  ens_cmd->add_option("--seed", ens.seed, "Base seed; member m uses seed+m");
  ens.interp.add_to(ens_cmd);
  ens_cmd->add_option("--out", ens.out, "Output directory")->required();
  ens_cmd->callback([&] { run_ensemble(ens); });

  PitOpts pit;
  CLI::App* pit_cmd = app.add_subcommand("pit", "Ultimate pit and nested shells");
  pit_cmd->add_option("--model", pit.model, "Block model CSV (usually the aggregate)")->required();
  pit_cmd->add_option("--econ", pit.econ, "Economics file")->required();
  pit_cmd->add_option("--pattern", pit.pattern, "Slope pattern: five or nine");
  pit_cmd->add_option("--factor-min", pit.factor_min, "Lowest revenue factor");
  pit_cmd->add_option("--factor-max", pit.factor_max, "Highest revenue factor");
  pit_cmd->add_option("--factor-count", pit.factor_count, "Number of shells");
  pit_cmd->add_option("--out", pit.out, "Output directory")->required();
  pit_cmd->callback([&] { run_pit(pit); });

  StageOpts stage;
  CLI::App* stage_cmd = app.add_subcommand("stage", "Partition the pit into stages");
  stage_cmd->add_option("--ensemble", stage.ensemble_dir, "Ensemble directory")->required();
  stage_cmd->add_option("--shells", stage.shells, "Shells CSV from the pit step")->required();
  stage_cmd->add_option("--econ", stage.econ, "Economics file")->required();
  stage_cmd->add_option("--strategy", stage.strategy, "lazy, worst_case, levelled or file");
  stage_cmd->add_option("--stages", stage.stages, "Stage count k");
  stage_cmd->add_option("--std-threshold", stage.std_threshold, "Grade std isolation threshold");
  stage_cmd->add_option("--staging-file", stage.staging_file, "Staging CSV for --strategy file");
  stage_cmd->add_option("--out", stage.out, "Output directory")->required();
  stage_cmd->callback([&] { run_stage(stage); });

  ScheduleOpts sched;
  CLI::App* sched_cmd = app.add_subcommand("schedule", "Optimize the stage/bench sequence");
  sched_cmd->add_option("--model", sched.model, "Aggregate block model CSV")->required();
  sched_cmd->add_option("--staging", sched.staging, "Staging CSV")->required();
  sched_cmd->add_option("--calendar", sched.calendar, "Calendar CSV")->required();
  sched_cmd->add_option("--econ", sched.econ, "Economics file")->required();
  sched_cmd->add_option("--pattern", sched.pattern, "Slope pattern: five or nine");
  sched_cmd->add_option("--stockpile", sched.stockpile, "Stockpiling: on or off");
  sched_cmd->add_flag("--oracle", sched.oracle, "Also print the brute-force optimum (<= 8 units)");
  sched.ea.add_to(sched_cmd);
  sched_cmd->add_option("--out", sched.out, "Output directory")->required();
  sched_cmd->callback([&] { run_schedule(sched); });

  EvaluateOpts eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Replay a schedule across the ensemble");
  eval_cmd->add_option("--schedule", eval.schedule, "Schedule CSV")->required();
  eval_cmd->add_option("--ensemble", eval.ensemble_dir, "Ensemble directory")->required();
  eval_cmd->add_option("--staging", eval.staging, "Staging CSV the schedule was built on")->required();
  eval_cmd->add_option("--calendar", eval.calendar, "Calendar CSV")->required();
  eval_cmd->add_option("--econ", eval.econ, "Economics file")->required();
  eval_cmd->add_option("--pattern", eval.pattern, "Slope pattern: five or nine");
  eval_cmd->add_option("--out", eval.out, "Output directory")->required();
  eval_cmd->callback([&] { run_evaluate(eval); });

  CompareOpts cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Stage, schedule and evaluate all strategies");
  cmp_cmd->add_option("--samples", cmp.samples, "Drill samples CSV")->required();
  cmp_cmd->add_option("--geometry", cmp.geometry, "Block model providing geometry/tonnage")->required();
  cmp_cmd->add_option("--calendar", cmp.calendar, "Calendar CSV")->required();
  cmp_cmd->add_option("--econ", cmp.econ, "Economics file")->required();
  cmp_cmd->add_option("--pattern", cmp.pattern, "Slope pattern: five or nine");
  cmp_cmd->add_option("--stockpile", cmp.stockpile, "Stockpiling: on or off");
  cmp_cmd->add_option("--members", cmp.members, "Ensemble size");
  cmp_cmd->add_option("--seed", cmp.seed, "Ensemble base seed");
  cmp_cmd->add_option("--stages", cmp.stages, "Stage count k");
  cmp_cmd->add_option("--std-threshold", cmp.std_threshold, "Worst-case isolation threshold");
  cmp_cmd->add_option("--staging-file", cmp.staging_file, "Engineer staging for the expected strategy");
  cmp.interp.add_to(cmp_cmd);
  cmp.ea.add_to(cmp_cmd, "--ea-seed");
  cmp_cmd->add_option("--out", cmp.out, "Output directory")->required();
  cmp_cmd->callback([&] { run_compare(cmp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
