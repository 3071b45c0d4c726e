#pragma once

// Internal Kahn topological sort with cycle extraction.

#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pitplan::detail {

struct TopoResult {
  bool acyclic = false;
  std::vector<int> order;  // valid iff acyclic
  std::vector<int> cycle;  // one directed cycle iff not acyclic
};

inline TopoResult topo_sort(int n, const std::vector<std::pair<int, int>>& arcs) {
  std::vector<std::vector<int>> succs(static_cast<size_t>(n));
  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : arcs) {
    if (from < 0 || from >= n || to < 0 || to >= n)
      throw std::runtime_error("arc references node outside [0," + std::to_string(n) + ")");
    succs[static_cast<size_t>(from)].push_back(to);
    ++degree[static_cast<size_t>(to)];
  }
  TopoResult result;
  std::queue<int> ready;
  for (int u = 0; u < n; ++u)
    if (degree[static_cast<size_t>(u)] == 0) ready.push(u);
  while (!ready.empty()) {
    const int u = ready.front();
    ready.pop();
    result.order.push_back(u);
    for (int v : succs[static_cast<size_t>(u)])
      if (--degree[static_cast<size_t>(v)] == 0) ready.push(v);
  }
  if (result.order.size() == static_cast<size_t>(n)) {
    result.acyclic = true;
    return result;
  }

  // Leftover nodes are in or downstream of a cycle. Prune leftover sinks so
  // every remaining node keeps a leftover successor; a walk must then repeat.
  std::vector<char> left(static_cast<size_t>(n), 0);
  for (int u = 0; u < n; ++u) left[static_cast<size_t>(u)] = degree[static_cast<size_t>(u)] > 0;
  std::vector<std::vector<int>> preds(static_cast<size_t>(n));
  std::vector<int> out_left(static_cast<size_t>(n), 0);
  for (const auto& [from, to] : arcs) {
    if (left[static_cast<size_t>(from)] && left[static_cast<size_t>(to)]) {
      ++out_left[static_cast<size_t>(from)];
      preds[static_cast<size_t>(to)].push_back(from);
    }
  }
  std::queue<int> dead;
  for (int u = 0; u < n; ++u)
    if (left[static_cast<size_t>(u)] && out_left[static_cast<size_t>(u)] == 0) dead.push(u);
  while (!dead.empty()) {
    const int u = dead.front();
    dead.pop();
    left[static_cast<size_t>(u)] = 0;
    for (int p : preds[static_cast<size_t>(u)])
      if (left[static_cast<size_t>(p)] && --out_left[static_cast<size_t>(p)] == 0) dead.push(p);
  }

  int start = 0;
  while (!left[static_cast<size_t>(start)]) ++start;
  std::vector<int> path;
  std::vector<int> seen_at(static_cast<size_t>(n), -1);
  int u = start;
  while (seen_at[static_cast<size_t>(u)] < 0) {
    seen_at[static_cast<size_t>(u)] = static_cast<int>(path.size());
    path.push_back(u);
    for (int v : succs[static_cast<size_t>(u)]) {
      if (left[static_cast<size_t>(v)]) {
        u = v;
        break;
      }
    }
  }
  result.cycle.assign(path.begin() + seen_at[static_cast<size_t>(u)], path.end());
  return result;
}

[[noreturn]] inline void throw_cycle(const std::string& what, const std::vector<int>& cycle) {
  std::string msg = what + " contains a cycle:";
  for (int node : cycle) msg += " " + std::to_string(node);
  if (!cycle.empty()) msg += " -> " + std::to_string(cycle.front());
  throw std::runtime_error(msg);
}

}  // namespace pitplan::detail
