#pragma once

#include <string>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/economics.hpp"

namespace pitplan {

// Block model CSV: header `i,j,k,tonnage,grade,domain[,stage]`, one row per
// block, dense over the grid. Optional leading `# key = value` lines carry
// geometry metadata (element, block_size, origin); absent metadata defaults
// to unit blocks at the origin. Save/load round-trips are lossless.
BlockModel load_block_model(const std::string& path);
void save_block_model(const BlockModel& model, const std::string& path);

// Samples CSV: header `x,y,z,grade,domain`.
std::vector<DrillSample> load_samples(const std::string& path);
void save_samples(const std::vector<DrillSample>& samples, const std::string& path);

// Calendar CSV: header `period,mining_capacity,plant_capacity`, periods
// 1..t_max contiguous.
Calendar load_calendar(const std::string& path);
void save_calendar(const Calendar& calendar, const std::string& path);

// Economics: flat `key = value` text file; recoveries as `recovery_domain_<id>`.
EconomicModel load_economics(const std::string& path);
void save_economics(const EconomicModel& econ, const std::string& path);

}  // namespace pitplan
