#pragma once

// Shared fixtures, fuzz generators and independent oracles for the test
// suites. Oracles here must stay independent of the implementation paths they
// check: closures by subset enumeration, orders by linear-extension listing.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pitplan/economics.hpp"
#include "pitplan/evolve.hpp"
#include "pitplan/max_closure.hpp"
#include "pitplan/precedence.hpp"
#include "pitplan/schedule.hpp"
#include "pitplan/shells.hpp"
#include "pitplan/staging.hpp"

namespace testsupport {

using namespace pitplan;

inline EconomicModel paper_econ() {
  EconomicModel econ;
  econ.price_per_tonne_metal = 7673.0;
  econ.mining_cost = 4.2;
  econ.processing_cost = 15.0;
  econ.selling_cost = 1.0;
  econ.rehab_cost = 1.0;
  econ.cutoff_grade = 0.0025;
  econ.discount_rate = 0.1;
  econ.recovery_by_domain = {{0, 0.92}, {1, 0.85}, {2, 0.75}};
  return econ;
}

inline BlockModel grid_model(GridDims dims, double tonnage = 1000.0, double grade = 0.0,
                             int domain = 0) {
  BlockModel model(dims, Vec3{10, 10, 10}, Vec3{0, 0, 0}, "Cu");
  for (Block& b : model.blocks) {
    b.tonnage = tonnage;
    b.grade = grade;
    b.domain = domain;
  }
  return model;
}

inline Calendar flat_calendar(int t_max, double mining, double plant) {
  Calendar cal;
  for (int t = 0; t < t_max; ++t) cal.periods.push_back({mining, plant});
  return cal;
}

/// Exhaustive maximum over closed subsets (empty set included); the
/// brute-force oracle for max_closure. Capped at 20 nodes.
inline std::int64_t closure_oracle(const ClosureProblem& problem) {
  const int n = problem.n_nodes();
  if (n > 20) throw std::runtime_error("closure oracle capped at 20 nodes");
  std::vector<std::uint32_t> pred_mask(static_cast<size_t>(n), 0);
  for (const auto& [pred, succ] : problem.arcs)
    pred_mask[static_cast<size_t>(succ)] |= (1u << pred);
  std::int64_t best = 0;
  const std::uint32_t limit = n == 32 ? 0 : (1u << n);
  for (std::uint32_t set = 1; set != limit; ++set) {
    bool closed = true;
    std::int64_t value = 0;
    for (int b = 0; b < n; ++b) {
      if (!(set & (1u << b))) continue;
      if (pred_mask[static_cast<size_t>(b)] & ~set) {
        closed = false;
        break;
      }
      value += problem.value_cents[static_cast<size_t>(b)];
    }
    if (closed && value > best) best = value;
  }
  return best;
}

/// Random values in [-100, 100] cents and random downward arcs (i < j).
inline ClosureProblem random_closure_problem(std::mt19937_64& rng, int max_nodes = 20) {
  std::uniform_int_distribution<int> n_dist(1, max_nodes);
  const int n = n_dist(rng);
  std::uniform_int_distribution<std::int64_t> value(-100, 100);
  ClosureProblem problem;
  for (int b = 0; b < n; ++b) problem.value_cents.push_back(value(rng));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double density = 0.15 + 0.2 * coin(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < density) problem.arcs.push_back({i, j});
  return problem;
}

/// Every topological order of the unit precedence, in lexicographic order.
inline std::vector<Chromosome> all_topological_orders(const UnitPrecedence& prec) {
  const int n = prec.n_units;
  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : prec.arcs) ++degree[static_cast<size_t>(to)];
  std::vector<Chromosome> all;
  Chromosome current;
  std::vector<char> placed(static_cast<size_t>(n), 0);
  auto rec = [&](auto&& self) -> void {
    if (current.size() == static_cast<size_t>(n)) {
      all.push_back(current);
      return;
    }
    for (int u = 0; u < n; ++u) {
      if (placed[static_cast<size_t>(u)] || degree[static_cast<size_t>(u)] != 0) continue;
      placed[static_cast<size_t>(u)] = 1;
      current.push_back(u);
      for (int v : prec.succs[static_cast<size_t>(u)]) --degree[static_cast<size_t>(v)];
      self(self);
      for (int v : prec.succs[static_cast<size_t>(u)]) ++degree[static_cast<size_t>(v)];
      current.pop_back();
      placed[static_cast<size_t>(u)] = 0;
    }
  };
  rec(rec);
  return all;
}

/// Small random scheduling instance: model, economics, nested shells, lazy
/// staging, units and calendar. Retries draws until the pit is nonempty and
/// the staging fits.
struct FuzzInstance {
  BlockModel model;
  EconomicModel econ;
  PrecedenceGraph precedence;
  ShellAssignment shells;
  Staging staging;
  UnitGraph units;
  Calendar calendar;
};

inline FuzzInstance random_instance(std::mt19937_64& rng, int max_units = 0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    FuzzInstance inst;
    const int nx = 1 + static_cast<int>(rng() % 4);
    const int ny = 1 + static_cast<int>(rng() % 4);
    const int nz = 1 + static_cast<int>(rng() % 3);
    inst.model = grid_model({nx, ny, nz});
    for (Block& b : inst.model.blocks) {
      b.tonnage = 500.0 + 2500.0 * unit(rng);
      b.grade = unit(rng) < 0.4 ? 0.002 + 0.03 * unit(rng) : 0.0005 * unit(rng);
      b.domain = static_cast<int>(rng() % 3);
    }
    inst.econ = paper_econ();
    inst.precedence = derive_precedence(
        inst.model, (rng() % 2) == 0 ? SlopePattern::FivePoint : SlopePattern::NinePoint);
    const std::vector<double> factors = {0.8, 1.0, 1.2};
    inst.shells = nested_shells(inst.model, inst.econ, inst.precedence, factors);
    const auto pit = inst.shells.pit_blocks();
    if (pit.empty()) continue;

    int distinct_shells = 0;
    for (int s = 1; s <= inst.shells.n_shells(); ++s) {
      bool any = false;
      for (int b : pit)
        if (inst.shells.shell_index[static_cast<size_t>(b)] == s) any = true;
      if (any) ++distinct_shells;
    }
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(distinct_shells));
    inst.staging = lazy_staging(inst.model, inst.shells, k);
    inst.units = build_units(inst.model, inst.staging, inst.precedence);
    if (max_units > 0 && static_cast<int>(inst.units.units.size()) > max_units) continue;

    const int t_max = 4 + static_cast<int>(rng() % 6);
    const double pit_tonnage = inst.shells.pit_tonnage(inst.model);
    const double mining = pit_tonnage * (0.15 + 0.5 * unit(rng));
    inst.calendar = flat_calendar(t_max, mining, mining * (0.2 + 0.6 * unit(rng)));
    return inst;
  }
  throw std::runtime_error("random_instance failed to draw a usable instance");
}

inline Chromosome random_order(const FuzzInstance& inst, std::mt19937_64& rng) {
  return random_topological_order(inst.units.precedence, rng);
}

}  // namespace testsupport
