#pragma once

#include <string>
#include <vector>

namespace pitplan {

/// Grid coordinates of a block. k counts benches downward: k = 0 is the top bench.
struct BlockIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  bool operator==(const BlockIndex&) const = default;
};

struct Block {
  BlockIndex index;
  double tonnage = 0.0;  // tonnes, > 0
  double grade = 0.0;    // mass fraction in [0,1]
  int domain = 0;        // lithological domain category id
  bool operator==(const Block&) const = default;
};

struct GridDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  int count() const { return nx * ny * nz; }
  bool operator==(const GridDims&) const = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Vec3&) const = default;
};

/// Dense regular 3-D block model. Blocks are stored row-major with
/// flat index (k * ny + j) * nx + i. The world z axis points up, so the
/// centroid of bench k sits at origin.z - (k + 0.5) * block_size.z.
struct BlockModel {
  GridDims dims;
  Vec3 block_size{1.0, 1.0, 1.0};  // meters per axis
  Vec3 origin;                     // world coordinates of the top corner
  std::string element_name = "Cu";
  std::vector<Block> blocks;

  BlockModel() = default;
  BlockModel(GridDims d, Vec3 size, Vec3 orig, std::string element);

  int flat(const BlockIndex& b) const { return (b.k * dims.ny + b.j) * dims.nx + b.i; }
  BlockIndex unflat(int id) const;
  bool in_bounds(const BlockIndex& b) const {
    return b.i >= 0 && b.j >= 0 && b.k >= 0 && b.i < dims.nx && b.j < dims.ny && b.k < dims.nz;
  }

  Block& at(const BlockIndex& b) { return blocks[flat(b)]; }
  const Block& at(const BlockIndex& b) const { return blocks[flat(b)]; }

  Vec3 centroid(const BlockIndex& b) const;
  double total_tonnage() const;
  bool same_geometry(const BlockModel& other) const;

  /// Throws std::runtime_error on any invariant violation (block count,
  /// index/array mismatch, nonpositive tonnage, grade outside [0,1]).
  void validate() const;

  bool operator==(const BlockModel&) const = default;
};

struct DrillSample {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double grade = 0.0;  // mass fraction
  int domain = 0;
  bool operator==(const DrillSample&) const = default;
};

}  // namespace pitplan
