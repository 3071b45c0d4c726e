#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pitplan/schedule.hpp"

namespace pitplan {

struct EAConfig {
  int population_size = 50;
  int generations = 100;
  int tournament_size = 3;
  double mutation_rate = 0.3;
  double crossover_rate = 0.9;
  int elitism_count = 2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EvolveResult {
  Chromosome best;
  Schedule schedule;
  double best_npv = 0.0;
  std::vector<double> trace;  // best fitness after each generation, length generations+1
};

bool is_topological_order(const Chromosome& chromosome, const UnitPrecedence& prec);
Chromosome random_topological_order(const UnitPrecedence& prec, std::mt19937_64& rng);

/// Order crossover: a window of `a` keeps its relative order, the rest fills
/// in `b`'s order, and a position-priority Kahn pass repairs the child to a
/// topological order (a no-op when the child already is one).
Chromosome order_crossover(const Chromosome& a, const Chromosome& b, const UnitPrecedence& prec,
                           std::mt19937_64& rng);

/// Swaps one random adjacent pair, skipped when an arc forbids it.
void adjacent_swap_mutation(Chromosome& chromosome, const UnitPrecedence& prec, std::mt19937_64& rng);

/// Seeded tournament GA over topological orders; fitness is the decoded
/// schedule's NPV. Elitism makes the per-generation best non-decreasing. Fully
/// deterministic per config.seed.
EvolveResult evolve(const UnitGraph& units, const BlockModel& model, const Calendar& calendar,
                    const EconomicModel& econ, bool stockpiling, const EAConfig& config);

/// Enumerates every topological order (unit count capped by `limit`), decodes
/// each, and returns the best; NPV ties go to the lexicographically smallest
/// order.
std::pair<Chromosome, double> brute_force_best(const UnitGraph& units, const BlockModel& model,
                                               const Calendar& calendar, const EconomicModel& econ,
                                               bool stockpiling, int limit = 8);

}  // namespace pitplan
