#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pitplan {

/// Maximum-closure instance. Node values are integer cents so the cut is
/// exact; arc (pred, succ) means succ cannot be taken without pred.
struct ClosureProblem {
  std::vector<std::int64_t> value_cents;
  std::vector<std::pair<int, int>> arcs;

  int n_nodes() const { return static_cast<int>(value_cents.size()); }
};

struct ClosureResult {
  std::vector<char> in_closure;  // per node
  std::int64_t value_cents = 0;  // sum of node values over the closure

  std::vector<int> members() const;  // sorted node ids
};

std::int64_t to_cents(double currency);

/// Solves max closure by the min-cut reduction (source->positive nodes,
/// negative nodes->sink, infinite arcs succ->pred), then takes the residual
/// source side. That side is the unique minimal maximum-value closure, so the
/// empty set comes back whenever no strictly positive closure exists. Nodes in
/// `forced` are pinned inside the closure. Throws on a precedence cycle,
/// listing one.
ClosureResult max_closure(const ClosureProblem& problem, std::span<const int> forced = {});

}  // namespace pitplan
