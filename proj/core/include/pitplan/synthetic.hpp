#pragma once

#include <cstdint>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"

namespace pitplan {

struct SyntheticDeposit {
  BlockModel ground_truth;
  std::vector<DrillSample> samples;
};

/// Builds a deterministic synthetic deposit: one or more ellipsoidal
/// high-grade bodies on a smooth low-frequency background, domains layered by
/// depth with an undulating boundary, constant-density tonnage. Drillholes are
/// vertical columns at seeded plan locations; each sample reads the exact
/// grade/domain of the block containing it.
SyntheticDeposit generate_synthetic_deposit(std::uint64_t seed, GridDims dims, double block_size,
                                            int n_domains, int n_drillholes);

/// Representative copper economics (price 7673/t, mining 4.2/t, processing
/// 15/t, selling and rehab 1/t, 0.25% cutoff, 10% discount), recoveries spread
/// from 0.92 down to 0.75 across domains.
EconomicModel default_economics(int n_domains);

/// Flat calendar: mining capacity total_tonnage/15 per period, plant a
/// quarter of that.
Calendar default_calendar(double total_tonnage, int t_max);

}  // namespace pitplan
