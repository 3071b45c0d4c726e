#include "pitplan/economics.hpp"

#include <stdexcept>
#include <string>

namespace pitplan {

double EconomicModel::recovery_for(int domain) const {
  auto it = recovery_by_domain.find(domain);
  if (it == recovery_by_domain.end())
    throw std::runtime_error("no recovery defined for domain " + std::to_string(domain));
  return it->second;
}

double block_value(const Block& block, const EconomicModel& econ, Destination dest) {
  const double mined_cost = block.tonnage * (econ.mining_cost + econ.rehab_cost);
  if (dest == Destination::Waste) return -mined_cost;
  auto it = econ.recovery_by_domain.find(block.domain);
  if (it == econ.recovery_by_domain.end())
    throw std::runtime_error("block (" + std::to_string(block.index.i) + "," + std::to_string(block.index.j) +
                             "," + std::to_string(block.index.k) + ") has unknown domain " +
                             std::to_string(block.domain));
  const double revenue = block.tonnage * block.grade * it->second * econ.price_per_tonne_metal;
  return revenue - mined_cost - block.tonnage * (econ.processing_cost + econ.selling_cost);
}

double process_margin_per_tonne(double grade, int domain, const EconomicModel& econ) {
  return grade * econ.recovery_for(domain) * econ.price_per_tonne_metal -
         (econ.processing_cost + econ.selling_cost);
}

void Calendar::validate() const {
  if (periods.empty()) throw std::runtime_error("calendar has no periods");
  for (size_t t = 0; t < periods.size(); ++t) {
    if (!(periods[t].mining_capacity >= 0.0) || !(periods[t].plant_capacity >= 0.0))
      throw std::runtime_error("calendar period " + std::to_string(t + 1) + " has negative capacity");
  }
}

}  // namespace pitplan
