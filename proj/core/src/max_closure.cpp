#include "pitplan/max_closure.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "graph_util.hpp"

namespace pitplan {

namespace {

constexpr std::int64_t kInfCapacity = std::numeric_limits<std::int64_t>::max() / 4;

struct FlowEdge {
  int to;
  int rev;
  std::int64_t cap;
};

class Dinic {
 public:
  explicit Dinic(int n)
      : adj_(static_cast<size_t>(n)), level_(static_cast<size_t>(n)), iter_(static_cast<size_t>(n)) {}

  void add_edge(int u, int v, std::int64_t cap) {
    adj_[static_cast<size_t>(u)].push_back(
        {v, static_cast<int>(adj_[static_cast<size_t>(v)].size()), cap});
    adj_[static_cast<size_t>(v)].push_back(
        {u, static_cast<int>(adj_[static_cast<size_t>(u)].size()) - 1, 0});
  }

  void max_flow(int s, int t) {
    while (bfs(s, t)) {
      iter_.assign(iter_.size(), 0);
      while (dfs(s, t, kInfCapacity) > 0) {
      }
    }
  }

  std::vector<char> residual_source_side(int s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[static_cast<size_t>(s)] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const FlowEdge& e : adj_[static_cast<size_t>(u)]) {
        if (e.cap > 0 && !seen[static_cast<size_t>(e.to)]) {
          seen[static_cast<size_t>(e.to)] = 1;
          q.push(e.to);
        }
      }
    }
    return seen;
  }

 private:
  bool bfs(int s, int t) {
    level_.assign(level_.size(), -1);
    std::queue<int> q;
    level_[static_cast<size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const FlowEdge& e : adj_[static_cast<size_t>(u)]) {
        if (e.cap > 0 && level_[static_cast<size_t>(e.to)] < 0) {
          level_[static_cast<size_t>(e.to)] = level_[static_cast<size_t>(u)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t pushed) {
    if (u == t) return pushed;
    for (int& i = iter_[static_cast<size_t>(u)];
         i < static_cast<int>(adj_[static_cast<size_t>(u)].size()); ++i) {
      FlowEdge& e = adj_[static_cast<size_t>(u)][static_cast<size_t>(i)];
      if (e.cap <= 0 || level_[static_cast<size_t>(e.to)] != level_[static_cast<size_t>(u)] + 1)
        continue;
      const std::int64_t got = dfs(e.to, t, std::min(pushed, e.cap));
      if (got > 0) {
        e.cap -= got;
        adj_[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<FlowEdge>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

std::vector<int> ClosureResult::members() const {
  std::vector<int> out;
  for (size_t i = 0; i < in_closure.size(); ++i)
    if (in_closure[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::int64_t to_cents(double currency) {
  const double cents = currency * 100.0;
  if (!(cents > -9.0e15 && cents < 9.0e15))
    throw std::runtime_error("currency value out of integer-cent range");
  return std::llround(cents);
}

ClosureResult max_closure(const ClosureProblem& problem, std::span<const int> forced) {
  const auto topo = detail::topo_sort(problem.n_nodes(), problem.arcs);
  if (!topo.acyclic) detail::throw_cycle("closure precedence", topo.cycle);

  const int n = problem.n_nodes();
  const int source = n, sink = n + 1;
  Dinic dinic(n + 2);
  for (int u = 0; u < n; ++u) {
    const std::int64_t v = problem.value_cents[static_cast<size_t>(u)];
    if (v > 0) dinic.add_edge(source, u, v);
    else if (v < 0) dinic.add_edge(u, sink, -v);
  }
  for (int u : forced) dinic.add_edge(source, u, kInfCapacity);
  // Taking succ pulls pred in: an uncut arc succ->pred keeps them on one side.
  for (const auto& [pred, succ] : problem.arcs) dinic.add_edge(succ, pred, kInfCapacity);

  dinic.max_flow(source, sink);
  const std::vector<char> side = dinic.residual_source_side(source);

  ClosureResult result;
  result.in_closure.assign(static_cast<size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    if (side[static_cast<size_t>(u)]) {
      result.in_closure[static_cast<size_t>(u)] = 1;
      result.value_cents += problem.value_cents[static_cast<size_t>(u)];
    }
  }
  return result;
}

}  // namespace pitplan
