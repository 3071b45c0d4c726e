#include "pitplan/evolve.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace pitplan {

namespace {

std::vector<int> positions_of(const Chromosome& chromosome, int n) {
  std::vector<int> pos(static_cast<size_t>(n), -1);
  for (size_t p = 0; p < chromosome.size(); ++p) pos[static_cast<size_t>(chromosome[p])] = static_cast<int>(p);
  return pos;
}

/// Kahn's algorithm taking the ready unit with the smallest priority value.
/// Reproduces `priority` itself whenever it encodes a topological order.
Chromosome kahn_by_priority(const std::vector<int>& priority, const UnitPrecedence& prec) {
  const int n = prec.n_units;
  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : prec.arcs) ++degree[static_cast<size_t>(to)];
  using Entry = std::pair<int, int>;  // (priority, unit)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (int u = 0; u < n; ++u)
    if (degree[static_cast<size_t>(u)] == 0) ready.push({priority[static_cast<size_t>(u)], u});
  Chromosome order;
  while (!ready.empty()) {
    const int u = ready.top().second;
    ready.pop();
    order.push_back(u);
    for (int v : prec.succs[static_cast<size_t>(u)])
      if (--degree[static_cast<size_t>(v)] == 0) ready.push({priority[static_cast<size_t>(v)], v});
  }
  if (order.size() != static_cast<size_t>(n))
    throw std::runtime_error("unit precedence is cyclic; cannot order units");
  return order;
}

}  // namespace

void EAConfig::validate() const {
  if (population_size < 2) throw std::runtime_error("population_size must be >= 2");
  if (generations < 0) throw std::runtime_error("generations must be >= 0");
  if (tournament_size < 1) throw std::runtime_error("tournament_size must be >= 1");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::runtime_error("mutation_rate must be in [0,1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::runtime_error("crossover_rate must be in [0,1]");
  if (elitism_count < 1 || elitism_count >= population_size)
    throw std::runtime_error("elitism_count must be in [1, population_size)");
}

bool is_topological_order(const Chromosome& chromosome, const UnitPrecedence& prec) {
  if (chromosome.size() != static_cast<size_t>(prec.n_units)) return false;
  std::vector<int> pos(static_cast<size_t>(prec.n_units), -1);
  for (size_t p = 0; p < chromosome.size(); ++p) {
    const int u = chromosome[p];
    if (u < 0 || u >= prec.n_units || pos[static_cast<size_t>(u)] >= 0) return false;
    pos[static_cast<size_t>(u)] = static_cast<int>(p);
  }
  for (const auto& [from, to] : prec.arcs)
    if (pos[static_cast<size_t>(from)] > pos[static_cast<size_t>(to)]) return false;
  return true;
}

Chromosome random_topological_order(const UnitPrecedence& prec, std::mt19937_64& rng) {
  const int n = prec.n_units;
  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : prec.arcs) ++degree[static_cast<size_t>(to)];
  std::vector<int> ready;
  for (int u = 0; u < n; ++u)
    if (degree[static_cast<size_t>(u)] == 0) ready.push_back(u);
  Chromosome order;
  while (!ready.empty()) {
    const size_t pick = rng() % ready.size();
    const int u = ready[pick];
    ready[pick] = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (int v : prec.succs[static_cast<size_t>(u)])
      if (--degree[static_cast<size_t>(v)] == 0) ready.push_back(v);
  }
  if (order.size() != static_cast<size_t>(n))
    throw std::runtime_error("unit precedence is cyclic; cannot order units");
  return order;
}

Chromosome order_crossover(const Chromosome& a, const Chromosome& b, const UnitPrecedence& prec,
                           std::mt19937_64& rng) {
  const size_t n = a.size();
  if (n < 2) return a;
  size_t lo = rng() % n, hi = rng() % n;
  if (lo > hi) std::swap(lo, hi);

  std::vector<char> used(n, 0);
  Chromosome child(n, -1);
  for (size_t p = lo; p <= hi; ++p) {
    child[p] = a[p];
    used[static_cast<size_t>(a[p])] = 1;
  }
  size_t fill = 0;
  for (int u : b) {
    if (used[static_cast<size_t>(u)]) continue;
    while (fill >= lo && fill <= hi) ++fill;
    child[fill++] = u;
  }
  return kahn_by_priority(positions_of(child, static_cast<int>(n)), prec);
}

void adjacent_swap_mutation(Chromosome& chromosome, const UnitPrecedence& prec, std::mt19937_64& rng) {
  if (chromosome.size() < 2) return;
  const size_t at = rng() % (chromosome.size() - 1);
  const int u = chromosome[at], v = chromosome[at + 1];
  // Swapping adjacent entries breaks the order only if u -> v is an arc.
  for (int s : prec.succs[static_cast<size_t>(u)])
    if (s == v) return;
  std::swap(chromosome[at], chromosome[at + 1]);
}

EvolveResult evolve(const UnitGraph& units, const BlockModel& model, const Calendar& calendar,
                    const EconomicModel& econ, bool stockpiling, const EAConfig& config) {
  config.validate();
  const UnitPrecedence& prec = units.precedence;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit_draw(0.0, 1.0);

  std::vector<Chromosome> pop;
  pop.reserve(static_cast<size_t>(config.population_size));
  // Seed one genome with the stage-major sweep (units are (stage, bench)
  // ordered); the repair pass keeps it valid for stagings where that sweep
  // alone is not.
  {
    std::vector<int> canonical(static_cast<size_t>(prec.n_units));
    for (int u = 0; u < prec.n_units; ++u) canonical[static_cast<size_t>(u)] = u;
    pop.push_back(kahn_by_priority(canonical, prec));
  }
  while (pop.size() < static_cast<size_t>(config.population_size))
    pop.push_back(random_topological_order(prec, rng));

  auto fitness_of = [&](const Chromosome& c) { return npv(decode(c, units, model, calendar, econ, stockpiling), econ); };
  std::vector<double> fitness(pop.size());
  for (size_t p = 0; p < pop.size(); ++p) fitness[p] = fitness_of(pop[p]);

  auto ranked = [&]() {
    std::vector<size_t> idx(pop.size());
    for (size_t p = 0; p < idx.size(); ++p) idx[p] = p;
    std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) {
      return fitness[x] != fitness[y] ? fitness[x] > fitness[y] : x < y;
    });
    return idx;
  };
  auto tournament = [&]() {
    size_t best = rng() % pop.size();
    for (int c = 1; c < config.tournament_size; ++c) {
      const size_t other = rng() % pop.size();
      if (fitness[other] > fitness[best] || (fitness[other] == fitness[best] && other < best))
        best = other;
    }
    return best;
  };

  EvolveResult result;
  result.trace.push_back(fitness[ranked().front()]);

  for (int g = 0; g < config.generations; ++g) {
    const std::vector<size_t> order = ranked();
    std::vector<Chromosome> next;
    next.reserve(pop.size());
    for (int e = 0; e < config.elitism_count; ++e) next.push_back(pop[order[static_cast<size_t>(e)]]);
    while (next.size() < pop.size()) {
      const Chromosome& p1 = pop[tournament()];
      const Chromosome& p2 = pop[tournament()];
      Chromosome child = unit_draw(rng) < config.crossover_rate ? order_crossover(p1, p2, prec, rng) : p1;
      if (unit_draw(rng) < config.mutation_rate) adjacent_swap_mutation(child, prec, rng);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    for (size_t p = 0; p < pop.size(); ++p) fitness[p] = fitness_of(pop[p]);
    result.trace.push_back(fitness[ranked().front()]);
  }

  const size_t best = ranked().front();
  result.best = pop[best];
  result.best_npv = fitness[best];
  result.schedule = decode(result.best, units, model, calendar, econ, stockpiling);
  return result;
}

std::pair<Chromosome, double> brute_force_best(const UnitGraph& units, const BlockModel& model,
                                               const Calendar& calendar, const EconomicModel& econ,
                                               bool stockpiling, int limit) {
  const UnitPrecedence& prec = units.precedence;
  const int n = prec.n_units;
  if (n > limit)
    throw std::runtime_error("brute force limited to " + std::to_string(limit) + " units, got " +
                             std::to_string(n));

  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : prec.arcs) ++degree[static_cast<size_t>(to)];

  Chromosome current, best;
  double best_npv = 0.0;
  bool found = false;
  // Recursing over ready units in ascending id enumerates linear extensions
  // in lexicographic order, so strict improvement keeps the smallest tie.
  auto enumerate = [&](auto&& self) -> void {
    if (current.size() == static_cast<size_t>(n)) {
      const double value = npv(decode(current, units, model, calendar, econ, stockpiling), econ);
      if (!found || value > best_npv) {
        found = true;
        best = current;
        best_npv = value;
      }
      return;
    }
    for (int u = 0; u < n; ++u) {
      if (degree[static_cast<size_t>(u)] != 0) continue;
      bool taken = false;
      for (int placed : current)
        if (placed == u) {
          taken = true;
          break;
        }
      if (taken) continue;
      current.push_back(u);
      for (int v : prec.succs[static_cast<size_t>(u)]) --degree[static_cast<size_t>(v)];
      self(self);
      for (int v : prec.succs[static_cast<size_t>(u)]) ++degree[static_cast<size_t>(v)];
      current.pop_back();
    }
  };
  enumerate(enumerate);
  if (!found) throw std::runtime_error("no topological order exists; unit precedence is cyclic");
  return {best, best_npv};
}

}  // namespace pitplan
