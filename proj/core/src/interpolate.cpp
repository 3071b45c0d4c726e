#include "pitplan/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pitplan {

void InterpolatorConfig::validate() const {
  if (!(idw_power > 0.0)) throw std::runtime_error("idw_power must be > 0");
  if (idw_max_neighbors < 1) throw std::runtime_error("idw_max_neighbors must be >= 1");
  if (!(bootstrap_fraction > 0.0 && bootstrap_fraction <= 1.0))
    throw std::runtime_error("bootstrap_fraction must be in (0,1]");
  for (int w : net_hidden_layers)
    if (w < 1) throw std::runtime_error("network hidden layer widths must be >= 1");
  if (!(net_fit_tolerance > 0.0)) throw std::runtime_error("net_fit_tolerance must be > 0");
  if (net_max_epochs < 0) throw std::runtime_error("net_max_epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw std::runtime_error("learning_rate must be > 0");
}

GradeDomain idw_interpolate(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                            Vec3 query) {
  if (samples.empty()) throw std::runtime_error("idw_interpolate needs at least one sample");

  struct Neighbor {
    double dist2;
    size_t idx;
  };
  std::vector<Neighbor> nb(samples.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    const double dx = samples[s].x - query.x, dy = samples[s].y - query.y, dz = samples[s].z - query.z;
    nb[s] = {dx * dx + dy * dy + dz * dz, s};
  }
  const size_t k = std::min(nb.size(), static_cast<size_t>(config.idw_max_neighbors));
  std::partial_sort(nb.begin(), nb.begin() + static_cast<long>(k), nb.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.idx < b.idx;
                    });

  constexpr double kSnapDist = 1e-9;  // meters
  if (nb[0].dist2 < kSnapDist * kSnapDist) {
    const DrillSample& s = samples[nb[0].idx];
    return {s.grade, s.domain};
  }

  double weight_sum = 0.0, grade_sum = 0.0;
  std::map<int, double> domain_weight;
  for (size_t n = 0; n < k; ++n) {
    const DrillSample& s = samples[nb[n].idx];
    const double w = std::pow(std::sqrt(nb[n].dist2), -config.idw_power);
    weight_sum += w;
    grade_sum += w * s.grade;
    domain_weight[s.domain] += w;
  }
  int best_domain = domain_weight.begin()->first;
  double best_weight = domain_weight.begin()->second;
  for (const auto& [dom, w] : domain_weight) {
    if (w > best_weight) {  // map iteration is id-ascending, so ties keep the lowest id
      best_domain = dom;
      best_weight = w;
    }
  }
  return {grade_sum / weight_sum, best_domain};
}

}  // namespace pitplan
