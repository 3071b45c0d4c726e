#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pitplan/max_closure.hpp"
#include "support/test_support.hpp"

using namespace pitplan;
using testsupport::closure_oracle;
using testsupport::random_closure_problem;

TEST_CASE("single positive block") {
  ClosureProblem p;
  p.value_cents = {1000};
  const ClosureResult r = max_closure(p);
  CHECK(r.value_cents == 1000);
  CHECK(r.members() == std::vector<int>{0});
}

TEST_CASE("profitable ore under waste takes both") {
  // node 0: waste -60, node 1: ore +100, waste above ore
  ClosureProblem p;
  p.value_cents = {-6000, 10000};
  p.arcs = {{0, 1}};
  const ClosureResult r = max_closure(p);
  CHECK(r.value_cents == 4000);
  CHECK(r.members() == std::vector<int>{0, 1});
}

TEST_CASE("unprofitable ore under waste stays in the ground") {
  ClosureProblem p;
  p.value_cents = {-6000, 5000};
  p.arcs = {{0, 1}};
  const ClosureResult r = max_closure(p);
  CHECK(r.value_cents == 0);
  CHECK(r.members().empty());
}

TEST_CASE("exact ties return the minimal closure") {
  ClosureProblem p;
  p.value_cents = {-6000, 6000};
  p.arcs = {{0, 1}};
  CHECK(max_closure(p).members().empty());
}

TEST_CASE("forced nodes are pinned into the closure") {
  ClosureProblem p;
  p.value_cents = {-6000, 5000};
  p.arcs = {{0, 1}};
  const std::vector<int> forced = {1};
  const ClosureResult r = max_closure(p, forced);
  CHECK(r.members() == std::vector<int>{0, 1});
}

TEST_CASE("cycles are reported with a path") {
  ClosureProblem p;
  p.value_cents = {1, 1, 1};
  p.arcs = {{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_WITH_AS(max_closure(p), doctest::Contains("cycle"), std::runtime_error);
}

TEST_CASE("matches exhaustive enumeration on fuzzed problems") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const ClosureProblem p = random_closure_problem(rng, 14);
    const ClosureResult r = max_closure(p);
    CHECK(r.value_cents == closure_oracle(p));
    // Closedness: every predecessor of a member is a member.
    for (const auto& [pred, succ] : p.arcs)
      if (r.in_closure[static_cast<size_t>(succ)]) CHECK(r.in_closure[static_cast<size_t>(pred)]);
    CHECK(r.value_cents >= 0);
  }
}

TEST_CASE("scaling positive values up never shrinks the optimum") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 40; ++trial) {
    const ClosureProblem p = random_closure_problem(rng, 12);
    ClosureProblem scaled = p;
    for (std::int64_t& v : scaled.value_cents)
      if (v > 0) v *= 3;
    CHECK(max_closure(scaled).value_cents >= max_closure(p).value_cents);
  }
}
