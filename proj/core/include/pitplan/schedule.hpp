#pragma once

#include <span>
#include <string>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"
#include "pitplan/staging.hpp"

namespace pitplan {

/// Extraction priority: a permutation of unit ids that is a topological order
/// of the unit precedence graph.
using Chromosome = std::vector<int>;

struct BlockParcel {
  int block = 0;  // flat id
  double to_mill = 0.0;
  double to_waste = 0.0;
  double to_stockpile = 0.0;  // tonnes
};

struct ExtractionRecord {
  int unit = 0;
  double fraction = 0.0;  // of the unit, mined this period, in (0,1]
  double tonnes = 0.0;    // fraction * unit tonnage
  double cashflow = 0.0;  // this extraction's parcels, undiscounted
  std::vector<BlockParcel> parcels;
};

struct ReclaimRecord {
  int block = 0;
  double tonnes = 0.0;
  double cashflow = 0.0;
};

struct Parcel {
  int block = 0;
  double tonnes = 0.0;
};

struct PeriodRecord {
  std::vector<ExtractionRecord> extractions;
  std::vector<ReclaimRecord> reclaims;  // stockpile fed to the plant this period
  std::vector<Parcel> stockpile_after;  // ledger at period end
  double mined = 0.0, milled = 0.0, wasted = 0.0, stockpiled = 0.0, reclaimed = 0.0;
  double cashflow = 0.0;  // undiscounted
};

/// Mining timing only: which fraction of which unit moves in which period.
struct MiningStep {
  int period = 0;  // 1-based
  int unit = 0;
  double fraction = 0.0;
};

struct Schedule {
  std::vector<PeriodRecord> periods;  // index 0 is period 1
  bool stockpiling = true;

  int t_max() const { return static_cast<int>(periods.size()); }
  std::vector<MiningStep> mining_plan() const;
  std::vector<double> cash_flows() const;
};

/// Greedy decoder: walks periods, mines units in priority order once their
/// predecessors are complete (possibly earlier in the same period), splitting
/// fractionally at the mining capacity. Freshly mined parcels go to the mill
/// highest grade first while above cutoff, worth processing, and plant
/// capacity remains; above-cutoff overflow goes to the stockpile (when
/// enabled) else waste; everything else goes to waste. Leftover plant capacity
/// reclaims the stockpile highest grade first. Total on valid inputs.
Schedule decode(const Chromosome& chromosome, const UnitGraph& units, const BlockModel& model,
                const Calendar& calendar, const EconomicModel& econ, bool stockpiling);

/// Holds the mining timing fixed and re-derives every destination decision
/// under `model`'s grades and domains.
Schedule replay_plan(std::span<const MiningStep> plan, const UnitGraph& units, const BlockModel& model,
                     const Calendar& calendar, const EconomicModel& econ, bool stockpiling);

/// Sum over periods of cashflow / (1+d)^(t-1).
double npv(const Schedule& schedule, const EconomicModel& econ);

struct Violation {
  std::string constraint;  // destination_uniqueness, precedence, mining_capacity, plant_capacity, ...
  int period = 0;          // 0 when not tied to a period
  std::string subject;
  double magnitude = 0.0;
};

/// Checks the four constraint families plus fraction bounds and stockpile
/// balance; empty iff the schedule is valid.
std::vector<Violation> validate(const Schedule& schedule, const UnitGraph& units,
                                const Calendar& calendar);

// Schedule CSV: one row per (period, unit) with activity, plus reclaim
// attribution to the source unit; a `# stockpiling = on|off` header records
// the decoding mode.
void save_schedule(const Schedule& schedule, const UnitGraph& units, const std::string& path);
struct LoadedSchedule {
  std::vector<MiningStep> plan;
  bool stockpiling = true;
};
LoadedSchedule load_schedule(const std::string& path, const UnitGraph& units);

// Chromosome file: one unit id per line.
void save_chromosome(const Chromosome& chromosome, const std::string& path);
Chromosome load_chromosome(const std::string& path);

}  // namespace pitplan
