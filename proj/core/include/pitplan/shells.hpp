#pragma once

#include <span>
#include <string>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"
#include "pitplan/max_closure.hpp"
#include "pitplan/precedence.hpp"

namespace pitplan {

/// Nested pit shells. shell_index is 0 for blocks outside every shell and
/// s >= 1 for blocks first entering the closure at revenue factor s; the
/// block set with shell_index in [1, s] is a valid closure for every s. The
/// outermost shell is the ultimate pit.
struct ShellAssignment {
  std::vector<int> shell_index;  // per block, aligned with the model
  std::vector<double> revenue_factors;

  int n_shells() const { return static_cast<int>(revenue_factors.size()); }
  std::vector<int> pit_blocks() const;  // flat ids with shell_index >= 1, ascending
  double pit_tonnage(const BlockModel& model) const;
};

/// 21 factors evenly spaced over [0.5, 1.5].
std::vector<double> default_revenue_factors();

/// Best-destination node values at the given revenue factor (price scaled by
/// factor), in integer cents.
ClosureProblem build_closure_problem(const BlockModel& model, const EconomicModel& econ,
                                     const PrecedenceGraph& precedence, double revenue_factor);

ShellAssignment nested_shells(const BlockModel& model, const EconomicModel& econ,
                              const PrecedenceGraph& precedence, std::span<const double> revenue_factors);

// Shell CSV: header `i,j,k,shell`, one row per in-pit block.
void save_shells(const ShellAssignment& shells, const BlockModel& model, const std::string& path);
ShellAssignment load_shells(const std::string& path, const BlockModel& model);

}  // namespace pitplan
