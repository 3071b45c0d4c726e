#pragma once

#include <map>
#include <vector>

#include "pitplan/block_model.hpp"

namespace pitplan {

enum class Destination { Process, Waste };

/// Prices, costs and the discount rate. Revenues and costs are constant over
/// time; only discounting carries time. Costs are per tonne: mining and
/// rehabilitation apply to every tonne mined, processing and selling to every
/// tonne fed to the plant.
struct EconomicModel {
  double price_per_tonne_metal = 0.0;
  double mining_cost = 0.0;
  double processing_cost = 0.0;
  double selling_cost = 0.0;
  double rehab_cost = 0.0;
  double cutoff_grade = 0.0;               // mass fraction in [0,1)
  std::map<int, double> recovery_by_domain;  // domain id -> recovered fraction (0,1]
  double discount_rate = 0.0;              // d >= 0, per period

  double recovery_for(int domain) const;   // throws on unknown domain
  bool operator==(const EconomicModel&) const = default;
};

/// Undiscounted cash value of sending a block to the given destination.
/// Waste: -tonnage * (mining + rehab). Process: revenue minus all costs.
double block_value(const Block& block, const EconomicModel& econ, Destination dest);

/// Per-tonne value of processing material of the given grade/domain, counting
/// only the plant-side terms (metal revenue minus processing and selling).
/// A parcel is worth milling over dumping exactly when this is positive.
double process_margin_per_tonne(double grade, int domain, const EconomicModel& econ);

struct CalendarPeriod {
  double mining_capacity = 0.0;  // M^t, tonnes
  double plant_capacity = 0.0;   // P^t, tonnes
  bool operator==(const CalendarPeriod&) const = default;
};

struct Calendar {
  std::vector<CalendarPeriod> periods;  // index 0 is period t = 1

  int t_max() const { return static_cast<int>(periods.size()); }
  const CalendarPeriod& period(int t) const { return periods[static_cast<size_t>(t - 1)]; }
  void validate() const;  // throws on negative capacities or no periods
  bool operator==(const Calendar&) const = default;
};

}  // namespace pitplan
