#include "pitplan/precedence.hpp"

#include <stdexcept>

namespace pitplan {

PrecedenceGraph PrecedenceGraph::from_arcs(int n_blocks, std::vector<std::pair<int, int>> arcs) {
  PrecedenceGraph g;
  g.n_blocks = n_blocks;
  g.arcs = std::move(arcs);
  g.preds.assign(static_cast<size_t>(n_blocks), {});
  for (const auto& [p, s] : g.arcs) g.preds[static_cast<size_t>(s)].push_back(p);
  return g;
}

PrecedenceGraph derive_precedence(const BlockModel& model, SlopePattern pattern) {
  if (model.blocks.empty()) throw std::runtime_error("cannot derive precedence for an empty model");
  std::vector<std::pair<int, int>> offsets = {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  if (pattern == SlopePattern::NinePoint) {
    offsets.push_back({-1, -1});
    offsets.push_back({-1, 1});
    offsets.push_back({1, -1});
    offsets.push_back({1, 1});
  }
  std::vector<std::pair<int, int>> arcs;
  for (int k = 1; k < model.dims.nz; ++k) {
    for (int j = 0; j < model.dims.ny; ++j) {
      for (int i = 0; i < model.dims.nx; ++i) {
        const int succ = model.flat({i, j, k});
        for (const auto& [di, dj] : offsets) {
          const BlockIndex above{i + di, j + dj, k - 1};
          if (model.in_bounds(above)) arcs.emplace_back(model.flat(above), succ);
        }
      }
    }
  }
  return PrecedenceGraph::from_arcs(model.dims.count(), std::move(arcs));
}

}  // namespace pitplan
