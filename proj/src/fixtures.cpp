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

#include "ringbalance/fixtures.hpp"

namespace ringbalance::fixtures {

FamilySpec pair_example_spec() {
  FamilySpec s;
  s.n = 2;
  s.t = 8;
  s.u = 2;
  s.c_prime = {{1, 3, 4, 7}};
  return s;
}

Instance example_one() { return gen_family_I1(pair_example_spec()); }
Instance example_two() { return gen_family_I2(pair_example_spec()); }

Instance three_agent_example() {
  return Instance::from_rows(3, {
                                    {5, 0, 4},  // nabla
                                    {4, 4, 0},  // triangle
                                    {0, 6, 4},  // diamond
                                    {0, 3, 2},  // heart
                                    {0, 1, 3},  // club
                                    {2, 0, 0},  // spade
                                });
}

Assignment three_agent_assignment_b() { return Assignment{{0, 1, 2, 1, 2, 0}}; }
Assignment three_agent_assignment_c() { return Assignment{{2, 0, 1, 1, 2, 0}}; }

}  // namespace ringbalance::fixtures
