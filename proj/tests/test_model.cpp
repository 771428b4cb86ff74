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
#include "ringbalance/model.hpp"

using namespace ringbalance;

TEST_CASE("validate_instance") {
  CHECK_NOTHROW(fixtures::example_two());
  CHECK_NOTHROW(Instance(1, 1, {0}));
  try {
    Instance(3, 2, std::vector<Count>(6, 1));
    FAIL("expected FewerColorsThanAgents");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FewerColorsThanAgents);
  }
  try {
    Instance(2, 2, {1, -1, 0, 0});
    FAIL("expected NegativeCount");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeCount);
  }
  try {
    Instance(2, 2, {1, 0, 0});
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("quota") {
  CHECK(quota(0, 3, 6) == 2);
  CHECK(quota(2, 3, 7) == 3);
  CHECK(quota(0, 3, 7) == 2);
  CHECK(quota_pivot(3, 7) == 2);
  for (int n = 1; n <= 64; ++n) {
    for (int m = n; m <= 64; ++m) {
      int sum = 0;
      for (int q : quotas(n, m)) sum += q;
      REQUIRE(sum == m);
    }
  }
}

TEST_CASE("is_balanced") {
  const Instance six(3, 6, std::vector<Count>(18, 0));
  const Instance seven(3, 7, std::vector<Count>(21, 0));
  CHECK(is_balanced(Assignment{{0, 0, 1, 1, 2, 2}}, six));
  CHECK(is_balanced(Assignment{{0, 0, 1, 1, 2, 2, 2}}, seven));
  CHECK(is_balanced(Assignment{{2, 2, 0, 0, 1, 1, 1}}, seven));
  CHECK_FALSE(is_balanced(Assignment{{0, 1, 1, 2, 2, 2}}, six));
  CHECK_FALSE(is_balanced(Assignment{{0, 0, 1, 1, 2}}, six));
  CHECK_FALSE(is_balanced(Assignment{{0, 0, 1, 1, 2, 3}}, six));
}

TEST_CASE("cost") {
  const Instance one = fixtures::example_one();
  const Instance two = fixtures::example_two();
  // C' = {1, 3, 4, 7} counting from zero.
  const Assignment c_prime_first{{1, 0, 1, 0, 0, 1, 1, 0}};
  const Assignment c_prime_second{{0, 1, 0, 1, 1, 0, 0, 1}};
  CHECK(cost(c_prime_first, one) == 16);
  CHECK(cost(c_prime_second, two) == 12);
  CHECK(cost(c_prime_first, one) + kept_weight(c_prime_first, one) == one.total_items());

  const Instance lone(2, 2, {3, 0, 5, 0});
  CHECK(cost(Assignment{{0, 0}}, lone) == 0);

  const Instance tri = fixtures::three_agent_example();
  CHECK(cost(fixtures::three_agent_assignment_b(), tri) == 17);
  CHECK(cost(fixtures::three_agent_assignment_c(), tri) == 16);
}

TEST_CASE("stage_intervals") {
  const auto s = stage_intervals(16, Rational(2));
  REQUIRE(s.size() == 5);
  const Count lo[] = {8, 4, 2, 1, 0};
  for (std::size_t r = 0; r < s.size(); ++r) {
    CHECK(s[r].lo == lo[r]);
    CHECK(s[r].r == static_cast<int>(r));
  }
  CHECK_FALSE(s[0].hi.has_value());
  CHECK(*s[1].hi == 8);
  CHECK(*s[4].hi == 1);

  const auto two = stage_intervals(2, Rational(2));
  REQUIRE(two.size() == 2);
  CHECK(two[0].lo == 1);
  CHECK(two[1].lo == 0);

  const auto frac = stage_intervals(4, Rational(3, 2));
  REQUIRE(frac.size() == 4);
  CHECK(frac[0].lo == 3);
  CHECK(*frac[1].hi == 3);
  CHECK(frac[1].lo == 2);
  CHECK(frac[2].lo == 1);
  CHECK(frac[3].lo == 0);

  CHECK(stage_of_weight(s, 100) == 0);
  CHECK(stage_of_weight(s, 5) == 1);
  CHECK(stage_of_weight(s, 0) == 4);

  CHECK_THROWS_AS(stage_intervals(16, Rational(1)), Error);
  CHECK_THROWS_AS(stage_intervals(1, Rational(2)), Error);
}

TEST_CASE("power_of_two_estimate") {
  CHECK(power_of_two_estimate(0) == 2);
  CHECK(power_of_two_estimate(1) == 2);
  CHECK(power_of_two_estimate(2) == 4);
  CHECK(power_of_two_estimate(5) == 8);
  CHECK(power_of_two_estimate(64) == 128);
}

TEST_CASE("approximation_ratio") {
  CHECK(approximation_ratio(14, 12).value == Rational(7, 6));
  CHECK(approximation_ratio(0, 0).value == 1);
  CHECK(approximation_ratio(17, 16).str() == "17/16");
  CHECK(approximation_ratio(3, 0).infinite);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3") == 3);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}
