#pragma once

#include <utility>
#include <vector>

#include "pitplan/block_model.hpp"

namespace pitplan {

/// Slope pattern: which blocks on the bench directly above must be removed
/// before a block becomes mineable. FivePoint is the center plus the 4-connected
/// neighbors, NinePoint the full 3x3 footprint (~45 degrees with cubic blocks).
enum class SlopePattern { FivePoint, NinePoint };

/// Arc (pred, succ) means pred must be mined no later than succ. All arcs run
/// from bench k-1 down to bench k, so the graph is acyclic by construction.
struct PrecedenceGraph {
  int n_blocks = 0;
  std::vector<std::pair<int, int>> arcs;  // (pred, succ) as flat block ids
  std::vector<std::vector<int>> preds;    // preds[b]: predecessors of block b

  static PrecedenceGraph from_arcs(int n_blocks, std::vector<std::pair<int, int>> arcs);
};

PrecedenceGraph derive_precedence(const BlockModel& model, SlopePattern pattern);

}  // namespace pitplan
