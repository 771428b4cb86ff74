// Copyright 2026 The ringbalance Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringbalance/fixtures.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/oracle.hpp"

using namespace ringbalance;

TEST_CASE("paired fixtures") {
  const Solution one = optimal_assignment(fixtures::example_one());
  CHECK(one.cost == 16);
  CHECK(one.assignment.pi == std::vector<AgentIndex>{1, 0, 1, 0, 0, 1, 1, 0});
  const Solution two = optimal_assignment(fixtures::example_two());
  CHECK(two.cost == 12);
  CHECK(two.assignment.pi == std::vector<AgentIndex>{0, 1, 0, 1, 1, 0, 0, 1});
  CHECK(exhaustive_optimal(fixtures::example_two()).cost == 12);
}

TEST_CASE("trivial optima") {
  const Instance diag = Instance::from_rows(3, {{4, 0, 0}, {0, 2, 0}, {0, 0, 7}});
  CHECK(optimal_assignment(diag).cost == 0);
  CHECK(hungarian_optimal(diag).cost == 0);
  CHECK(exhaustive_optimal(Instance::from_rows(2, {{1, 0}, {0, 1}})).cost == 0);
  CHECK(max_kept_weight(diag) == 13);
}

TEST_CASE("flow, exhaustive and hungarian agree") {
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const int m = n + static_cast<int>((seed / 4) % 5);
    const Instance inst = gen_random(n, m, seed % 3 ? 30 : 2, seed % 2 ? 0.5 : 1.0, seed);
    const Solution flow = optimal_assignment(inst);
    REQUIRE(is_balanced(flow.assignment, inst));
    CHECK(cost(flow.assignment, inst) == flow.cost);
    const Solution brute = exhaustive_optimal(inst);
    CHECK(is_balanced(brute.assignment, inst));
    CHECK(flow.cost == brute.cost);
    CHECK(max_kept_weight(inst) + flow.cost == inst.total_items());
    if (m == n) CHECK(hungarian_optimal(inst).cost == flow.cost);
  }
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random(9, 9, 100, 1.0, seed);
    CHECK(hungarian_optimal(inst).cost == optimal_assignment(inst).cost);
  }
  CHECK_THROWS_AS(hungarian_optimal(gen_random(2, 3, 5, 1.0, 1)), Error);
}

TEST_CASE("quota_optimal") {
  // Label 1 holds both heavy colors but may keep only one of them.
  const Instance inst = Instance::from_rows(2, {{0, 16}, {0, 32}, {1, 0}});
  CHECK(optimal_assignment(inst).cost == 0);
  const std::vector<int> caps{2, 1};
  const Solution fixed = quota_optimal(inst, caps);
  CHECK(fixed.cost == 16);
  CHECK(fixed.assignment.degrees(2) == caps);
  const std::vector<int> bad{1, 1};
  CHECK_THROWS_AS(quota_optimal(inst, bad), Error);
}

TEST_CASE("exhaustive guard") {
  CHECK(balanced_assignment_count(2, 4) == 6);
  CHECK(balanced_assignment_count(3, 4) == 36);
  try {
    exhaustive_optimal(gen_random(6, 16, 5, 1.0, 1));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("pair lemma") {
  CHECK(verify_pair_lemma(fixtures::example_one()));
  CHECK(verify_pair_lemma(fixtures::example_two()));
  const PairStructure ps = pair_structure(fixtures::example_one());
  CHECK(ps.pairs == 1);
  CHECK(ps.block == 8);
  try {
    verify_pair_lemma(fixtures::three_agent_example());
    FAIL("expected NotFamilyInstance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFamilyInstance);
  }
}

TEST_CASE("cost skew hook") {
  testing::set_oracle_cost_skew(1);
  CHECK(optimal_assignment(fixtures::example_one()).cost == 17);
  testing::set_oracle_cost_skew(0);
  CHECK(optimal_assignment(fixtures::example_one()).cost == 16);
}
