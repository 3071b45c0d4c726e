#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "pitplan/staging.hpp"
#include "pitplan/synthetic.hpp"
#include "support/test_support.hpp"

using namespace pitplan;
using testsupport::grid_model;
using testsupport::paper_econ;

namespace {

/// A 4x1x1 sheet where each column is its own shell (values irrelevant here);
/// shells are assigned by hand so the grouping arithmetic is exact.
struct HandShells {
  BlockModel model;
  ShellAssignment shells;
};

HandShells four_shells(std::vector<double> tonnages) {
  HandShells h;
  h.model = grid_model({static_cast<int>(tonnages.size()), 1, 1});
  for (size_t b = 0; b < tonnages.size(); ++b) h.model.blocks[b].tonnage = tonnages[b];
  h.shells.shell_index.assign(tonnages.size(), 0);
  for (size_t b = 0; b < tonnages.size(); ++b) h.shells.shell_index[b] = static_cast<int>(b) + 1;
  for (size_t b = 0; b < tonnages.size(); ++b) h.shells.revenue_factors.push_back(1.0 + b);
  return h;
}

UncertaintyField zero_field(size_t n) {
  UncertaintyField f;
  f.grade_std.assign(n, 0.0);
  f.domain_disagreement.assign(n, 0.0);
  return f;
}

void check_partition(const Staging& st, const std::vector<int>& pit) {
  std::set<int> staged;
  for (size_t b = 0; b < st.stage_index.size(); ++b)
    if (st.stage_index[b] >= 1) staged.insert(static_cast<int>(b));
  CHECK(staged == std::set<int>(pit.begin(), pit.end()));
  std::map<int, int> sizes;
  for (int s : st.stage_index)
    if (s >= 1) ++sizes[s];
  CHECK(static_cast<int>(sizes.size()) == st.n_stages);
  for (const auto& [stage, count] : sizes) {
    CHECK(stage >= 1);
    CHECK(stage <= st.n_stages);
    CHECK(count > 0);
  }
}

}  // namespace

TEST_CASE("lazy staging with k equal to the shell count is the identity") {
  HandShells h = four_shells({10, 20, 5, 30});
  const Staging st = lazy_staging(h.model, h.shells, 4);
  for (size_t b = 0; b < 4; ++b) CHECK(st.stage_index[b] == static_cast<int>(b) + 1);
}

TEST_CASE("lazy staging with one stage takes the whole pit") {
  HandShells h = four_shells({10, 20, 5, 30});
  const Staging st = lazy_staging(h.model, h.shells, 1);
  for (size_t b = 0; b < 4; ++b) CHECK(st.stage_index[b] == 1);
}

TEST_CASE("lazy staging balances tonnage greedily") {
  HandShells h = four_shells({10, 10, 10, 10});
  const Staging st = lazy_staging(h.model, h.shells, 2);
  CHECK(st.stage_index == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("lazy staging needs enough nonempty shells") {
  HandShells h = four_shells({10, 10, 10, 10});
  CHECK_THROWS_WITH_AS(lazy_staging(h.model, h.shells, 5), doctest::Contains("nonempty shells"),
                       std::runtime_error);
}

TEST_CASE("worst case falls back to lazy when nothing is uncertain") {
  HandShells h = four_shells({10, 10, 10, 10});
  const Staging st =
      worst_case_staging(h.model, h.shells, zero_field(4), paper_econ(), 4, 0.01);
  CHECK(st.fallback_warning);
  CHECK(st.stage_index == lazy_staging(h.model, h.shells, 4).stage_index);
}

TEST_CASE("worst case isolates all uncertain ore when everything qualifies") {
  HandShells h = four_shells({10, 10, 10, 10, 10, 10});
  // Blocks 0..3 waste (grade 0), 4..5 uncertain ore.
  h.model.blocks[4].grade = 0.02;
  h.model.blocks[5].grade = 0.02;
  UncertaintyField field = zero_field(6);
  field.grade_std[4] = 0.05;
  field.grade_std[5] = 0.05;
  const Staging st = worst_case_staging(h.model, h.shells, field, paper_econ(), 4, 0.01);
  CHECK(st.n_stages == 4);
  CHECK(st.stage_index[4] == 3);
  CHECK(st.stage_index[5] == 4);
  for (size_t b = 0; b < 4; ++b) CHECK(st.stage_index[b] <= 2);
}

TEST_CASE("worst case postcondition on a synthetic deposit") {
  const auto deposit = generate_synthetic_deposit(7, {12, 12, 8}, 10.0, 3, 10);
  const EconomicModel econ = default_economics(3);
  const PrecedenceGraph prec = derive_precedence(deposit.ground_truth, SlopePattern::NinePoint);
  const ShellAssignment shells =
      nested_shells(deposit.ground_truth, econ, prec, default_revenue_factors());
  // Synthesize a spread-out uncertainty field tied to grade.
  UncertaintyField field = zero_field(deposit.ground_truth.blocks.size());
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (size_t b = 0; b < field.grade_std.size(); ++b)
    field.grade_std[b] = deposit.ground_truth.blocks[b].grade * unit(rng);
  const int k = 6;
  const double threshold = 0.004;
  const Staging st = worst_case_staging(deposit.ground_truth, shells, field, econ, k, threshold);
  check_partition(st, shells.pit_blocks());
  for (int b : shells.pit_blocks()) {
    const Block& blk = deposit.ground_truth.blocks[static_cast<size_t>(b)];
    if (blk.grade >= econ.cutoff_grade && field.grade_std[static_cast<size_t>(b)] > threshold) {
      CHECK(st.stage_index[static_cast<size_t>(b)] >= k - 1);
    }
  }
}

TEST_CASE("levelled staging reduces to lazy without uncertainty") {
  HandShells h = four_shells({10, 20, 5, 30});
  const Staging lazy = lazy_staging(h.model, h.shells, 2);
  const Staging lev = levelled_staging(h.model, h.shells, zero_field(4), paper_econ(), 2);
  CHECK(lev.stage_index == lazy.stage_index);
}

TEST_CASE("levelled staging splits equal masses one shell per stage") {
  HandShells h = four_shells({10, 10});
  h.model.blocks[0].grade = 0.01;
  h.model.blocks[1].grade = 0.01;
  UncertaintyField field = zero_field(2);
  field.grade_std = {1.0, 1.0};  // masses 10 and 10
  const Staging st = levelled_staging(h.model, h.shells, field, paper_econ(), 2);
  CHECK(st.stage_index == std::vector<int>{1, 2});
}

TEST_CASE("levelled staging greedy sweep matches the hand run") {
  // Masses 6,2,2,6 and k=2 -> stages {1,2} and {3,4} with masses 8,8.
  HandShells h = four_shells({6, 2, 2, 6});
  for (Block& b : h.model.blocks) b.grade = 0.01;
  UncertaintyField field = zero_field(4);
  field.grade_std = {1.0, 1.0, 1.0, 1.0};  // mass = tonnage
  const Staging st = levelled_staging(h.model, h.shells, field, paper_econ(), 2);
  CHECK(st.stage_index == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("levelled balance bound holds on fuzzed shells") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 10);
    std::vector<double> tonnages;
    for (int s = 0; s < m; ++s) tonnages.push_back(5.0 + 95.0 * unit(rng));
    HandShells h = four_shells(tonnages);
    for (Block& b : h.model.blocks) b.grade = 0.01;
    UncertaintyField field = zero_field(static_cast<size_t>(m));
    double max_mass = 0.0;
    for (int s = 0; s < m; ++s) {
      field.grade_std[static_cast<size_t>(s)] = unit(rng);
      max_mass = std::max(max_mass, tonnages[static_cast<size_t>(s)] * field.grade_std[static_cast<size_t>(s)]);
    }
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
    const Staging st = levelled_staging(h.model, h.shells, field, paper_econ(), k);
    std::vector<double> stage_mass(static_cast<size_t>(k) + 1, 0.0);
    for (size_t b = 0; b < h.model.blocks.size(); ++b)
      stage_mass[static_cast<size_t>(st.stage_index[b])] +=
          h.model.blocks[b].tonnage * field.grade_std[b];
    double lo = stage_mass[1], hi = stage_mass[1];
    for (int s = 2; s <= k; ++s) {
      lo = std::min(lo, stage_mass[static_cast<size_t>(s)]);
      hi = std::max(hi, stage_mass[static_cast<size_t>(s)]);
    }
    CHECK(hi - lo <= max_mass + 1e-9);
  }
}

TEST_CASE("all strategies produce valid partitions on synthetic deposits") {
  std::mt19937_64 seeds(73);
  for (int trial = 0; trial < 5; ++trial) {
    const auto deposit =
        generate_synthetic_deposit(seeds(), {10, 10, 6}, 10.0, 3, 8);
    const EconomicModel econ = default_economics(3);
    const PrecedenceGraph prec = derive_precedence(deposit.ground_truth, SlopePattern::NinePoint);
    const ShellAssignment shells =
        nested_shells(deposit.ground_truth, econ, prec, default_revenue_factors());
    if (shells.pit_blocks().empty()) continue;
    UncertaintyField field = zero_field(deposit.ground_truth.blocks.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& s : field.grade_std) s = 0.02 * unit(seeds);
    const std::vector<int> pit = shells.pit_blocks();
    for (int k : {1, 2, 4}) {
      if (k > shells.n_shells()) continue;
      try {
        check_partition(lazy_staging(deposit.ground_truth, shells, k), pit);
      } catch (const std::runtime_error&) {
        // fewer nonempty shells than k; legitimate
      }
    }
    check_partition(worst_case_staging(deposit.ground_truth, shells, field, econ, 6, 0.01), pit);
    check_partition(levelled_staging(deposit.ground_truth, shells, field, econ, 6), pit);
  }
}

TEST_CASE("staging files round-trip and renumber") {
  HandShells h = four_shells({10, 10, 10, 10});
  const Staging st = lazy_staging(h.model, h.shells, 2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "pitplan_staging_rt.csv").string();
  save_staging(st, h.model, path);
  const std::vector<int> pit = h.shells.pit_blocks();
  const Staging loaded = load_staging(path, h.model, pit);
  CHECK(loaded.stage_index == st.stage_index);
  CHECK(loaded.n_stages == st.n_stages);

  // Stage ids {2,5} normalize to {1,2} preserving order.
  std::ofstream out(path);
  out << "i,j,k,stage\n0,0,0,2\n1,0,0,2\n2,0,0,5\n3,0,0,5\n";
  out.close();
  const Staging renumbered = load_staging(path, h.model, pit);
  CHECK(renumbered.n_stages == 2);
  CHECK(renumbered.stage_index == std::vector<int>{1, 1, 2, 2});
  std::remove(path.c_str());
}

TEST_CASE("staging file omitting a pit block names it") {
  HandShells h = four_shells({10, 10, 10, 10});
  const std::string path =
      (std::filesystem::temp_directory_path() / "pitplan_staging_miss.csv").string();
  std::ofstream out(path);
  out << "i,j,k,stage\n0,0,0,1\n1,0,0,1\n2,0,0,2\n";
  out.close();
  const std::vector<int> pit = h.shells.pit_blocks();
  CHECK_THROWS_WITH_AS(load_staging(path, h.model, pit), doctest::Contains("(3,0,0)"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("units form per nonempty stage-bench pair with lifted precedence") {
  // 2x1x3 column pair, two stages split vertically.
  BlockModel model = grid_model({2, 1, 3});
  const PrecedenceGraph prec = derive_precedence(model, SlopePattern::FivePoint);
  Staging st;
  st.stage_index.assign(6, 0);
  st.n_stages = 2;
  // Stage 1: column i=0; stage 2: column i=1 (all benches staged).
  for (int k = 0; k < 3; ++k) {
    st.stage_index[static_cast<size_t>(model.flat({0, 0, k}))] = 1;
    st.stage_index[static_cast<size_t>(model.flat({1, 0, k}))] = 2;
  }
  const UnitGraph graph = build_units(model, st, prec);
  CHECK(graph.units.size() == 6);  // 2 stages x 3 benches
  // In-stage bench chains exist.
  CHECK(graph.unit_id(1, 0) >= 0);
  const auto has_arc = [&](int a, int b) {
    for (const auto& [from, to] : graph.precedence.arcs)
      if (from == a && to == b) return true;
    return false;
  };
  CHECK(has_arc(graph.unit_id(1, 0), graph.unit_id(1, 1)));
  CHECK(has_arc(graph.unit_id(2, 0), graph.unit_id(2, 1)));
  // Five-point arcs cross the columns: (0,0,k-1) precedes (1,0,k).
  CHECK(has_arc(graph.unit_id(1, 0), graph.unit_id(2, 1)));
  CHECK(has_arc(graph.unit_id(2, 0), graph.unit_id(1, 1)));
}

TEST_CASE("single stage yields a bench chain") {
  BlockModel model = grid_model({2, 2, 4});
  const PrecedenceGraph prec = derive_precedence(model, SlopePattern::NinePoint);
  Staging st;
  st.stage_index.assign(model.blocks.size(), 1);
  st.n_stages = 1;
  const UnitGraph graph = build_units(model, st, prec);
  REQUIRE(graph.units.size() == 4);
  for (size_t u = 0; u + 1 < graph.units.size(); ++u)
    CHECK(graph.units[u].bench < graph.units[u + 1].bench);
}

TEST_CASE("a pathological precedence induces a unit cycle error") {
  // Same-bench arcs running both ways between two stages lift to a 2-cycle.
  BlockModel model = grid_model({4, 1, 1});
  Staging st;
  st.stage_index = {1, 2, 1, 2};
  st.n_stages = 2;
  const PrecedenceGraph twisted =
      PrecedenceGraph::from_arcs(4, {{0, 1}, {1, 2}});  // stage1 -> stage2 -> stage1
  CHECK_THROWS_WITH_AS(build_units(model, st, twisted), doctest::Contains("cycle"),
                       std::runtime_error);
}
