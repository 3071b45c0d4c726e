#include "pitplan/staging.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "graph_util.hpp"
#include "text_util.hpp"

namespace pitplan {

namespace {

struct ShellGroup {
  int shell = 0;
  std::vector<int> blocks;  // ascending flat ids
};

std::vector<ShellGroup> nonempty_shells(const ShellAssignment& shells) {
  std::map<int, std::vector<int>> by_shell;
  for (size_t b = 0; b < shells.shell_index.size(); ++b)
    if (shells.shell_index[b] >= 1) by_shell[shells.shell_index[b]].push_back(static_cast<int>(b));
  std::vector<ShellGroup> out;
  for (auto& [shell, blocks] : by_shell) out.push_back({shell, std::move(blocks)});
  return out;
}

/// Contiguous grouping of items into q groups: accumulate until the weight
/// reaches total/q, then start the next group. Count guards keep every group
/// nonempty. Returns the 1-based group of each item.
std::vector<int> group_by_threshold(const std::vector<double>& weights, int q) {
  const int n = static_cast<int>(weights.size());
  if (n < q) throw std::runtime_error("cannot split " + std::to_string(n) + " items into " +
                                      std::to_string(q) + " nonempty groups");
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = total / q;
  std::vector<int> group(static_cast<size_t>(n));
  int g = 1;
  double cur = 0.0;
  for (int idx = 0; idx < n; ++idx) {
    group[static_cast<size_t>(idx)] = g;
    cur += weights[static_cast<size_t>(idx)];
    const int items_after = n - idx - 1;
    if (g < q && (cur >= target || items_after == q - g)) {
      ++g;
      cur = 0.0;
    }
  }
  return group;
}

/// Contiguous grouping minimizing (max group weight - min group weight).
/// Enumerates all boundary placements when that is cheap and falls back to
/// the adaptive sweep otherwise. Ties keep the earliest boundaries, which is
/// what a left-to-right sweep settles on.
std::vector<int> group_by_balance(const std::vector<double>& weights, int q);

/// Contiguous grouping aiming for equal group weights: a group takes the next
/// item only while that moves it closer to the adaptive target
/// (remaining weight / remaining groups).
std::vector<int> group_by_nearest_target(const std::vector<double>& weights, int q) {
  const int n = static_cast<int>(weights.size());
  if (n < q) throw std::runtime_error("cannot split " + std::to_string(n) + " items into " +
                                      std::to_string(q) + " nonempty groups");
  double remaining = 0.0;
  for (double w : weights) remaining += w;
  std::vector<int> group(static_cast<size_t>(n));
  int g = 1;
  int in_group = 0;
  double cur = 0.0;
  double target = remaining / q;
  for (int idx = 0; idx < n; ++idx) {
    const double w = weights[static_cast<size_t>(idx)];
    if (in_group > 0 && g < q) {
      const bool count_forces_close = (n - idx) <= (q - g);
      const bool past_target = !(cur < target - w / 2.0);
      if (count_forces_close || past_target) {
        remaining -= cur;
        ++g;
        cur = 0.0;
        in_group = 0;
        target = remaining / (q - g + 1);
      }
    }
    group[static_cast<size_t>(idx)] = g;
    cur += w;
    ++in_group;
  }
  return group;
}

std::vector<int> group_by_balance(const std::vector<double>& weights, int q) {
  const int n = static_cast<int>(weights.size());
  if (n < q) throw std::runtime_error("cannot split " + std::to_string(n) + " items into " +
                                      std::to_string(q) + " nonempty groups");
  double combos = 1.0;  // C(n-1, q-1)
  for (int c = 1; c < q; ++c) combos = combos * (n - c) / c;
  if (combos > 2e6) return group_by_nearest_target(weights, q);

  std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[static_cast<size_t>(i) + 1] = prefix[static_cast<size_t>(i)] + weights[static_cast<size_t>(i)];

  std::vector<int> cuts(static_cast<size_t>(q) - 1, 0), best_cuts;
  double best_spread = 0.0;
  bool found = false;
  auto place = [&](auto&& self, int index, int from) -> void {
    if (index == q - 1) {
      double lo = 0.0, hi = 0.0;
      int start = 0;
      for (int g = 0; g < q; ++g) {
        const int end = g < q - 1 ? cuts[static_cast<size_t>(g)] : n;
        const double mass = prefix[static_cast<size_t>(end)] - prefix[static_cast<size_t>(start)];
        if (g == 0) lo = hi = mass;
        lo = std::min(lo, mass);
        hi = std::max(hi, mass);
        start = end;
      }
      if (!found || hi - lo < best_spread) {
        found = true;
        best_spread = hi - lo;
        best_cuts = cuts;
      }
      return;
    }
    // Leave room for the remaining groups.
    for (int cut = from; cut <= n - (q - 1 - index); ++cut) {
      cuts[static_cast<size_t>(index)] = cut;
      self(self, index + 1, cut + 1);
    }
  };
  place(place, 0, 1);

  std::vector<int> group(static_cast<size_t>(n));
  int g = 1;
  for (int i = 0; i < n; ++i) {
    while (g < q && i >= best_cuts[static_cast<size_t>(g) - 1]) ++g;
    group[static_cast<size_t>(i)] = g;
  }
  return group;
}

double shell_tonnage(const ShellGroup& s, const BlockModel& model) {
  double t = 0.0;
  for (int b : s.blocks) t += model.blocks[static_cast<size_t>(b)].tonnage;
  return t;
}

bool is_ore(const BlockModel& model, const EconomicModel& econ, int b) {
  return model.blocks[static_cast<size_t>(b)].grade >= econ.cutoff_grade;
}

Staging from_shell_groups(const std::vector<ShellGroup>& groups, const std::vector<int>& stage_of_group,
                          size_t n_blocks, int k) {
  Staging st;
  st.stage_index.assign(n_blocks, 0);
  st.n_stages = k;
  for (size_t g = 0; g < groups.size(); ++g)
    for (int b : groups[g].blocks) st.stage_index[static_cast<size_t>(b)] = stage_of_group[g];
  st.validate(n_blocks);
  return st;
}

}  // namespace

std::vector<int> Staging::pit_blocks() const {
  std::vector<int> out;
  for (size_t b = 0; b < stage_index.size(); ++b)
    if (stage_index[b] >= 1) out.push_back(static_cast<int>(b));
  return out;
}

void Staging::validate(size_t n_blocks) const {
  if (stage_index.size() != n_blocks)
    throw std::runtime_error("staging covers " + std::to_string(stage_index.size()) +
                             " blocks, model has " + std::to_string(n_blocks));
  std::vector<int> count(static_cast<size_t>(n_stages) + 1, 0);
  for (int s : stage_index) {
    if (s < 0 || s > n_stages)
      throw std::runtime_error("stage id " + std::to_string(s) + " outside [0," +
                               std::to_string(n_stages) + "]");
    ++count[static_cast<size_t>(s)];
  }
  for (int s = 1; s <= n_stages; ++s)
    if (count[static_cast<size_t>(s)] == 0)
      throw std::runtime_error("stage " + std::to_string(s) + " is empty");
}

Staging lazy_staging(const BlockModel& model, const ShellAssignment& shells, int k) {
  if (k < 1) throw std::runtime_error("lazy staging needs k >= 1");
  const auto groups = nonempty_shells(shells);
  if (static_cast<int>(groups.size()) < k)
    throw std::runtime_error("lazy staging needs at least " + std::to_string(k) +
                             " nonempty shells, found " + std::to_string(groups.size()));
  std::vector<double> weights;
  for (const ShellGroup& g : groups) weights.push_back(shell_tonnage(g, model));
  return from_shell_groups(groups, group_by_threshold(weights, k), model.blocks.size(), k);
}

Staging worst_case_staging(const BlockModel& model, const ShellAssignment& shells,
                           const UncertaintyField& uncertainty, const EconomicModel& econ, int k,
                           double std_threshold) {
  if (k < 3) throw std::runtime_error("worst-case staging needs k >= 3");
  if (uncertainty.grade_std.size() != model.blocks.size())
    throw std::runtime_error("uncertainty field does not match the model");

  // Pit blocks in (shell, index) order, partitioned into uncertain ore / rest.
  std::vector<int> uncertain, rest;
  for (const ShellGroup& g : nonempty_shells(shells)) {
    for (int b : g.blocks) {
      if (is_ore(model, econ, b) && uncertainty.grade_std[static_cast<size_t>(b)] > std_threshold)
        uncertain.push_back(b);
      else
        rest.push_back(b);
    }
  }

  if (uncertain.empty()) {
    Staging st = lazy_staging(model, shells, k);
    st.fallback_warning = true;
    return st;
  }

  const int uncertain_stages = uncertain.size() >= 2 ? 2 : 1;
  const int rest_stages = k - uncertain_stages;
  auto tonnage_of = [&](const std::vector<int>& ids) {
    std::vector<double> w;
    for (int b : ids) w.push_back(model.blocks[static_cast<size_t>(b)].tonnage);
    return w;
  };
  const std::vector<int> rest_group = group_by_threshold(tonnage_of(rest), rest_stages);
  const std::vector<int> unc_group = group_by_threshold(tonnage_of(uncertain), uncertain_stages);

  Staging st;
  st.stage_index.assign(model.blocks.size(), 0);
  st.n_stages = k;
  for (size_t p = 0; p < rest.size(); ++p)
    st.stage_index[static_cast<size_t>(rest[p])] = rest_group[p];
  for (size_t p = 0; p < uncertain.size(); ++p)
    st.stage_index[static_cast<size_t>(uncertain[p])] = rest_stages + unc_group[p];
  st.validate(model.blocks.size());
  return st;
}

Staging levelled_staging(const BlockModel& model, const ShellAssignment& shells,
                         const UncertaintyField& uncertainty, const EconomicModel& econ, int k) {
  if (k < 1) throw std::runtime_error("levelled staging needs k >= 1");
  if (uncertainty.grade_std.size() != model.blocks.size())
    throw std::runtime_error("uncertainty field does not match the model");

  auto block_mass = [&](int b) {
    return is_ore(model, econ, b)
               ? model.blocks[static_cast<size_t>(b)].tonnage * uncertainty.grade_std[static_cast<size_t>(b)]
               : 0.0;
  };
  const auto groups = nonempty_shells(shells);
  double total_mass = 0.0;
  std::vector<double> shell_mass;
  for (const ShellGroup& g : groups) {
    double m = 0.0;
    for (int b : g.blocks) m += block_mass(b);
    shell_mass.push_back(m);
    total_mass += m;
  }
  if (total_mass <= 0.0) return lazy_staging(model, shells, k);

  if (static_cast<int>(groups.size()) >= k)
    return from_shell_groups(groups, group_by_balance(shell_mass, k), model.blocks.size(), k);

  // Fewer shells than stages: sweep at block granularity, same order.
  std::vector<int> ordered;
  for (const ShellGroup& g : groups) ordered.insert(ordered.end(), g.blocks.begin(), g.blocks.end());
  std::vector<double> weights;
  for (int b : ordered) weights.push_back(block_mass(b));
  const std::vector<int> group = group_by_balance(weights, k);
  Staging st;
  st.stage_index.assign(model.blocks.size(), 0);
  st.n_stages = k;
  for (size_t p = 0; p < ordered.size(); ++p)
    st.stage_index[static_cast<size_t>(ordered[p])] = group[p];
  st.validate(model.blocks.size());
  return st;
}

void save_staging(const Staging& staging, const BlockModel& model, const std::string& path) {
  auto out = detail::open_out(path);
  out << "i,j,k,stage\n";
  for (size_t b = 0; b < staging.stage_index.size(); ++b) {
    if (staging.stage_index[b] >= 1) {
      const BlockIndex idx = model.blocks[b].index;
      out << idx.i << ',' << idx.j << ',' << idx.k << ',' << staging.stage_index[b] << "\n";
    }
  }
}

Staging load_staging(const std::string& path, const BlockModel& model) {
  return load_staging(path, model, std::span<const int>{});
}

Staging load_staging(const std::string& path, const BlockModel& model, std::span<const int> pit) {
  detail::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) detail::parse_fail(path, reader.line_no(), "empty staging file");
  if (line != "i,j,k,stage") detail::parse_fail(path, reader.line_no(), "expected header i,j,k,stage");

  std::vector<int> raw(model.blocks.size(), 0);  // 0 = unstaged
  std::set<int> ids;
  while (reader.next(line)) {
    auto f = detail::split(line, ',');
    if (f.size() != 4)
      detail::parse_fail(path, reader.line_no(), "expected 4 fields, got " + std::to_string(f.size()));
    BlockIndex idx{static_cast<int>(detail::to_long(f[0], path, reader.line_no(), "i")),
                   static_cast<int>(detail::to_long(f[1], path, reader.line_no(), "j")),
                   static_cast<int>(detail::to_long(f[2], path, reader.line_no(), "k"))};
    const int stage = static_cast<int>(detail::to_long(f[3], path, reader.line_no(), "stage"));
    if (!model.in_bounds(idx)) detail::parse_fail(path, reader.line_no(), "block index outside the model");
    if (stage < 1) detail::parse_fail(path, reader.line_no(), "stage ids start at 1");
    const int id = model.flat(idx);
    if (raw[static_cast<size_t>(id)] != 0)
      detail::parse_fail(path, reader.line_no(), "duplicate block (" + std::to_string(idx.i) + "," +
                                                     std::to_string(idx.j) + "," + std::to_string(idx.k) +
                                                     ")");
    raw[static_cast<size_t>(id)] = stage;
    ids.insert(stage);
  }

  if (!pit.empty()) {
    for (int b : pit) {
      if (raw[static_cast<size_t>(b)] == 0) {
        const BlockIndex idx = model.blocks[static_cast<size_t>(b)].index;
        throw std::runtime_error(path + ": staging omits pit block (" + std::to_string(idx.i) + "," +
                                 std::to_string(idx.j) + "," + std::to_string(idx.k) + ")");
      }
    }
    std::vector<char> in_pit(model.blocks.size(), 0);
    for (int b : pit) in_pit[static_cast<size_t>(b)] = 1;
    for (size_t b = 0; b < raw.size(); ++b) {
      if (raw[b] != 0 && !in_pit[b]) {
        const BlockIndex idx = model.blocks[b].index;
        throw std::runtime_error(path + ": staging includes block (" + std::to_string(idx.i) + "," +
                                 std::to_string(idx.j) + "," + std::to_string(idx.k) +
                                 ") outside the pit");
      }
    }
  }

  // Normalize arbitrary ids to contiguous 1..k preserving order.
  std::map<int, int> renumber;
  for (int id : ids) renumber[id] = static_cast<int>(renumber.size()) + 1;
  Staging st;
  st.stage_index.assign(model.blocks.size(), 0);
  st.n_stages = static_cast<int>(renumber.size());
  for (size_t b = 0; b < raw.size(); ++b)
    if (raw[b] != 0) st.stage_index[b] = renumber[raw[b]];
  st.validate(model.blocks.size());
  return st;
}

int UnitGraph::unit_id(int stage, int bench) const {
  const auto it = std::lower_bound(units.begin(), units.end(), std::pair(stage, bench),
                                   [](const StageBenchUnit& u, const std::pair<int, int>& key) {
                                     return std::pair(u.stage, u.bench) < key;
                                   });
  if (it == units.end() || it->stage != stage || it->bench != bench) return -1;
  return static_cast<int>(it - units.begin());
}

UnitGraph build_units(const BlockModel& model, const Staging& staging,
                      const PrecedenceGraph& precedence) {
  staging.validate(model.blocks.size());
  std::map<std::pair<int, int>, std::vector<int>> grouped;  // (stage, bench) -> blocks
  for (size_t b = 0; b < staging.stage_index.size(); ++b)
    if (staging.stage_index[b] >= 1)
      grouped[{staging.stage_index[b], model.blocks[b].index.k}].push_back(static_cast<int>(b));

  UnitGraph graph;
  std::vector<int> unit_of(model.blocks.size(), -1);
  for (auto& [key, blocks] : grouped) {
    StageBenchUnit unit;
    unit.stage = key.first;
    unit.bench = key.second;
    unit.blocks = std::move(blocks);
    for (int b : unit.blocks) {
      unit.tonnage += model.blocks[static_cast<size_t>(b)].tonnage;
      unit_of[static_cast<size_t>(b)] = static_cast<int>(graph.units.size());
    }
    graph.units.push_back(std::move(unit));
  }

  std::set<std::pair<int, int>> arc_set;
  for (const auto& [pred, succ] : precedence.arcs) {
    const int up = unit_of[static_cast<size_t>(pred)], us = unit_of[static_cast<size_t>(succ)];
    if (up >= 0 && us >= 0 && up != us) arc_set.insert({up, us});
  }
  for (size_t u = 0; u + 1 < graph.units.size(); ++u) {
    // Bench chain within a stage (units are (stage, bench)-ordered).
    if (graph.units[u].stage == graph.units[u + 1].stage)
      arc_set.insert({static_cast<int>(u), static_cast<int>(u + 1)});
  }

  UnitPrecedence& prec = graph.precedence;
  prec.n_units = static_cast<int>(graph.units.size());
  prec.arcs.assign(arc_set.begin(), arc_set.end());
  prec.preds.assign(static_cast<size_t>(prec.n_units), {});
  prec.succs.assign(static_cast<size_t>(prec.n_units), {});
  for (const auto& [from, to] : prec.arcs) {
    prec.preds[static_cast<size_t>(to)].push_back(from);
    prec.succs[static_cast<size_t>(from)].push_back(to);
  }

  const auto topo = detail::topo_sort(prec.n_units, prec.arcs);
  if (!topo.acyclic) detail::throw_cycle("stage/bench unit precedence", topo.cycle);
  return graph;
}

}  // namespace pitplan
