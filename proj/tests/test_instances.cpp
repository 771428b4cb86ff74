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

#include <functional>

#include "ringbalance/fixtures.hpp"
#include "ringbalance/instances.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

using namespace ringbalance;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("gen_random") {
  const Instance zero = gen_random(2, 4, 0, 0.5, 3);
  CHECK(zero.total_items() == 0);
  CHECK(gen_random(4, 8, 64, 0.5, 7) == gen_random(4, 8, 64, 0.5, 7));
  CHECK_FALSE(gen_random(4, 8, 64, 0.5, 7) == gen_random(4, 8, 64, 0.5, 8));
  const Instance inst = gen_random(4, 8, 64, 0.5, 7);
  CHECK(inst.max_weight() <= 64);
  CHECK(code_of([] { gen_random(3, 2, 5, 1.0, 1); }) == ErrorCode::BadParams);
  CHECK(code_of([] { gen_random(3, 4, 5, 1.5, 1); }) == ErrorCode::BadParams);
  CHECK(code_of([] { gen_random(3, 4, -1, 1.0, 1); }) == ErrorCode::BadParams);
}

TEST_CASE("paired family tables") {
  const FamilySpec spec = fixtures::pair_example_spec();
  const Instance one = gen_family_I1(spec);
  const Instance two = gen_family_I2(spec);
  for (ColorIndex j = 0; j < 8; ++j) {
    CHECK(one(j, 0) == 2);
    CHECK(two(j, 0) == 2);
  }
  const std::vector<Count> partner_one{3, 2, 3, 2, 2, 3, 3, 2};
  const std::vector<Count> partner_two{1, 2, 1, 2, 2, 1, 1, 2};
  for (ColorIndex j = 0; j < 8; ++j) {
    CHECK(one(j, 1) == partner_one[j]);
    CHECK(two(j, 1) == partner_two[j]);
  }
  CHECK(family_I1_cost(one, spec) == 16);
  CHECK(family_I2_cost(two, spec) == 12);
}

TEST_CASE("larger paired families") {
  FamilySpec spec;
  spec.n = 6;
  spec.t = 4;
  spec.u = 5;
  spec.c_prime = {{0, 3}, {1, 2}, {2, 3}};
  const Instance one = gen_family_I1(spec);
  const Instance two = gen_family_I2(spec);
  CHECK(one.colors() == 12);
  CHECK(family_c_prime(spec, 1) == std::vector<int>{1, 2});
  CHECK(verify_pair_lemma(one));
  CHECK(verify_pair_lemma(two));
  CHECK(optimal_assignment(one).cost == family_I1_cost(one, spec));
  CHECK(optimal_assignment(two).cost == family_I2_cost(two, spec));
  FamilySpec odd = spec;
  odd.t = 3;
  CHECK_THROWS_AS(gen_family_I1(odd), Error);
}

TEST_CASE("tight family") {
  TightSpec spec;
  spec.n = 4;
  spec.q = 2280;
  const Instance inst = gen_tight(spec);
  CHECK(inst(0, 0) == 2109);
  CHECK(inst(0, 1) == 4047);
  CHECK(inst(1, 0) == 2280);
  CHECK(inst(1, 1) == 0);
  CHECK(optimal_assignment(inst).cost == tight_optimal_cost(spec));
  CHECK(tight_ratio_formula(Rational(9, 10), Rational(1, 10)) == Rational(107, 37));

  ProtocolConfig cfg;
  cfg.leader = 0;
  cfg.policy = SelectionPolicy::LowestIndexFirst;
  const RunResult run = run_balance(inst, cfg);
  const Ratio ratio = approximation_ratio(cost(run.assignment, inst), optimal_assignment(inst).cost);
  CHECK(ratio.value >= 2);

  TightSpec frac;
  frac.q = 3;
  frac.delta = Rational(1, 2);
  frac.epsilon = Rational(1, 2);
  CHECK(code_of([&] { gen_tight(frac); }) == ErrorCode::NonIntegralWeights);

  TightSpec wide;
  wide.q = 40;
  CHECK(code_of([&] { gen_tight(wide); }) == ErrorCode::IntervalConditionUnsatisfiable);
  wide.require_same_interval = false;
  CHECK_NOTHROW(gen_tight(wide));

  TightSpec odd;
  odd.n = 3;
  CHECK(code_of([&] { gen_tight(odd); }) == ErrorCode::BadParams);
}
