#pragma once

#include <span>
#include <vector>

#include "pitplan/block_model.hpp"

namespace pitplan {

enum class InterpolationMethod { IDW, Network };

struct InterpolatorConfig {
  InterpolationMethod method = InterpolationMethod::IDW;
  double idw_power = 3.0;
  int idw_max_neighbors = 10;
  double bootstrap_fraction = 0.5;          // (0,1]
  std::vector<int> net_hidden_layers = {16, 16};
  double net_fit_tolerance = 1e-4;          // stop when training loss <= this
  int net_max_epochs = 2000;
  double learning_rate = 0.05;

  void validate() const;  // throws on out-of-range fields
};

struct GradeDomain {
  double grade = 0.0;
  int domain = 0;
};

/// Inverse-distance-weighted estimate over the nearest idw_max_neighbors
/// samples, weights dist^-power. A sample within 1e-9 m of the query is
/// returned exactly. Domain is the weighted plurality vote, ties going to the
/// lowest domain id.
GradeDomain idw_interpolate(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                            Vec3 query);

}  // namespace pitplan
