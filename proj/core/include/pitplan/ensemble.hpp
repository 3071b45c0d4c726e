#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/interpolate.hpp"

namespace pitplan {

/// N interpolated block models sharing one geometry; their disagreement is
/// the grade/domain uncertainty the evaluation stage quantifies.
struct Ensemble {
  std::vector<BlockModel> members;
  std::vector<std::uint64_t> member_seeds;

  int size() const { return static_cast<int>(members.size()); }
};

struct UncertaintyField {
  std::vector<double> grade_std;            // population std of grade across members
  std::vector<double> domain_disagreement;  // fraction of members off the aggregate domain
};

/// Member m is seeded with base_seed + m. IDW members draw a power jitter in
/// [0.75, 1.25]x and a bootstrap resample of the samples; network members vary
/// only the initialization seed. A single-member IDW ensemble is the plain
/// interpolation of the full sample set, so aggregate(ensemble of one) is the
/// interpolation itself.
Ensemble build_ensemble(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                        int n_members, std::uint64_t base_seed, const BlockModel& geometry);

/// Consensus model: plurality domain (ties to the lowest id), mean grade over
/// the members voting that domain, tonnage from the shared geometry.
BlockModel aggregate(const Ensemble& ensemble);

UncertaintyField uncertainty_field(const Ensemble& ensemble, const BlockModel& aggregate_model);

// On-disk layout: <dir>/member_00.csv ... member_NN.csv, aggregate.csv and an
// ensemble.meta key-value file recording seeds, method and parameters.
struct LoadedEnsemble {
  Ensemble ensemble;
  BlockModel aggregate;
  InterpolatorConfig config;
  std::uint64_t base_seed = 0;
};
void save_ensemble(const Ensemble& ensemble, const BlockModel& aggregate_model,
                   const InterpolatorConfig& config, std::uint64_t base_seed, const std::string& dir);
LoadedEnsemble load_ensemble(const std::string& dir);

}  // namespace pitplan
