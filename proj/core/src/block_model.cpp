#include "pitplan/block_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pitplan {

BlockModel::BlockModel(GridDims d, Vec3 size, Vec3 orig, std::string element)
    : dims(d), block_size(size), origin(orig), element_name(std::move(element)) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
    throw std::runtime_error("block model dims must be positive, got " + std::to_string(dims.nx) +
                             "x" + std::to_string(dims.ny) + "x" + std::to_string(dims.nz));
  }
  blocks.resize(static_cast<size_t>(dims.count()));
  for (int k = 0; k < dims.nz; ++k)
    for (int j = 0; j < dims.ny; ++j)
      for (int i = 0; i < dims.nx; ++i) blocks[static_cast<size_t>(flat({i, j, k}))].index = {i, j, k};
}

BlockIndex BlockModel::unflat(int id) const {
  const int layer = dims.nx * dims.ny;
  return BlockIndex{id % dims.nx, (id / dims.nx) % dims.ny, id / layer};
}

Vec3 BlockModel::centroid(const BlockIndex& b) const {
  return Vec3{origin.x + (b.i + 0.5) * block_size.x, origin.y + (b.j + 0.5) * block_size.y,
              origin.z - (b.k + 0.5) * block_size.z};
}

double BlockModel::total_tonnage() const {
  double t = 0.0;
  for (const Block& b : blocks) t += b.tonnage;
  return t;
}

bool BlockModel::same_geometry(const BlockModel& other) const {
  return dims == other.dims && block_size == other.block_size && origin == other.origin;
}

void BlockModel::validate() const {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) throw std::runtime_error("block model has empty dims");
  if (blocks.size() != static_cast<size_t>(dims.count()))
    throw std::runtime_error("block model holds " + std::to_string(blocks.size()) + " blocks, dims require " +
                             std::to_string(dims.count()));
  for (size_t n = 0; n < blocks.size(); ++n) {
    const Block& b = blocks[n];
    if (!in_bounds(b.index) || flat(b.index) != static_cast<int>(n))
      throw std::runtime_error("block " + std::to_string(n) + " has index inconsistent with its array slot");
    if (!(b.tonnage > 0.0) || !std::isfinite(b.tonnage))
      throw std::runtime_error("block (" + std::to_string(b.index.i) + "," + std::to_string(b.index.j) + "," +
                               std::to_string(b.index.k) + ") has nonpositive tonnage");
    if (!(b.grade >= 0.0 && b.grade <= 1.0))
      throw std::runtime_error("block (" + std::to_string(b.index.i) + "," + std::to_string(b.index.j) + "," +
                               std::to_string(b.index.k) + ") has grade outside [0,1]");
    if (b.domain < 0)
      throw std::runtime_error("block (" + std::to_string(b.index.i) + "," + std::to_string(b.index.j) + "," +
                               std::to_string(b.index.k) + ") has negative domain id");
  }
}

}  // namespace pitplan
