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

// Small named instances.

#ifndef RINGBALANCE_FIXTURES_HPP_
#define RINGBALANCE_FIXTURES_HPP_

#include "ringbalance/instances.hpp"

namespace ringbalance::fixtures {

/// One pair, eight colors, u = 2, C' = {2, 4, 5, 8} counted from 1.
FamilySpec pair_example_spec();

/// I1 built from pair_example_spec(): optimal cost 16.
Instance example_one();
/// I2 built from pair_example_spec(): optimal cost 12.
Instance example_two();

/// Three agents and six colors in the order
///   0 nabla, 1 triangle, 2 diamond, 3 heart, 4 club, 5 spade.
/// Counts are chosen so that the two assignments below cost 17 and 16.
Instance three_agent_example();
Assignment three_agent_assignment_b();  // 17
Assignment three_agent_assignment_c();  // 16

}  // namespace ringbalance::fixtures

#endif  // RINGBALANCE_FIXTURES_HPP_
