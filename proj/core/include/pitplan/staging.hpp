#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"
#include "pitplan/ensemble.hpp"
#include "pitplan/precedence.hpp"
#include "pitplan/shells.hpp"

namespace pitplan {

/// Partition of the pit into stages 1..n_stages (0 = outside the pit).
/// Stages are disjoint, cover the pit, and are all nonempty.
struct Staging {
  std::vector<int> stage_index;  // per block, aligned with the model
  int n_stages = 0;
  bool fallback_warning = false;  // set when worst-case staging degenerated to lazy

  std::vector<int> pit_blocks() const;
  void validate(size_t n_blocks) const;  // throws on partition violations
};

/// Contiguous shell ranges merged into k tonnage-balanced stages.
/// Throws when fewer than k shells are nonempty.
Staging lazy_staging(const BlockModel& model, const ShellAssignment& shells, int k);

/// Ore blocks (aggregate grade >= cutoff) with grade std above the threshold
/// are isolated into the last two stages, split by shell order; everything
/// else fills the first k-2 stages, tonnage balanced. Falls back to lazy
/// staging (with the warning flag set) when no ore block is uncertain.
Staging worst_case_staging(const BlockModel& model, const ShellAssignment& shells,
                           const UncertaintyField& uncertainty, const EconomicModel& econ, int k = 6,
                           double std_threshold = 0.01);

/// Stage boundaries swept over shell order to equalize per-stage uncertainty
/// mass (sum of tonnage * grade_std over ore blocks).
Staging levelled_staging(const BlockModel& model, const ShellAssignment& shells,
                         const UncertaintyField& uncertainty, const EconomicModel& econ, int k = 6);

// Staging CSV: header `i,j,k,stage`; blocks outside the pit omitted. Stage ids
// are normalized to contiguous 1..k preserving order on load. When `pit` is
// given the file must cover exactly those blocks.
void save_staging(const Staging& staging, const BlockModel& model, const std::string& path);
Staging load_staging(const std::string& path, const BlockModel& model);
Staging load_staging(const std::string& path, const BlockModel& model, std::span<const int> pit);

/// One schedulable unit: every staged block sharing (stage, bench).
struct StageBenchUnit {
  int stage = 0;
  int bench = 0;
  std::vector<int> blocks;  // flat ids, ascending
  double tonnage = 0.0;
};

struct UnitPrecedence {
  int n_units = 0;
  std::vector<std::pair<int, int>> arcs;
  std::vector<std::vector<int>> preds;
  std::vector<std::vector<int>> succs;
};

struct UnitGraph {
  std::vector<StageBenchUnit> units;  // ordered by (stage, bench)
  UnitPrecedence precedence;

  int unit_id(int stage, int bench) const;  // -1 when absent
};

/// Lifts block precedence to units: arc U->V when a block of V has a
/// predecessor in U, plus the in-stage bench chain. Throws when a pathological
/// staging induces a cycle, listing it.
UnitGraph build_units(const BlockModel& model, const Staging& staging,
                      const PrecedenceGraph& precedence);

}  // namespace pitplan
