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

#ifndef RINGBALANCE_ORACLE_HPP_
#define RINGBALANCE_ORACLE_HPP_

#include <cstdint>
#include <span>

#include "ringbalance/model.hpp"

namespace ringbalance {

struct Solution {
  Assignment assignment;
  Count cost = 0;
};

/// Minimum-cost balanced assignment via min-cost flow. Each agent has
/// floor(m/n) slots of its own plus access to a shared pool of
/// m - n*floor(m/n) extra slots, at most one per agent.
Solution optimal_assignment(const Instance& inst);

/// Largest kept weight over balanced assignments, from the same flow.
Count max_kept_weight(const Instance& inst);

/// Cheapest assignment in which agent i receives exactly capacity[i]
/// colors. With the protocol's label quotas this is the best any
/// fixed-quota protocol can do. Throws ShapeMismatch or InvalidArgument.
Solution quota_optimal(const Instance& inst, std::span<const int> capacity);

/// Number of balanced assignments of the instance's shape.
/// Saturates at INT64_MAX.
std::int64_t balanced_assignment_count(int n, int m);

inline constexpr std::int64_t kExhaustiveGuard = 1'000'000;

/// Enumerates every balanced assignment. Throws TooLarge above `guard`.
Solution exhaustive_optimal(const Instance& inst, std::int64_t guard = kExhaustiveGuard);

/// Maximum-weight perfect matching for m == n (O(n^3)).
Solution hungarian_optimal(const Instance& inst);

/// Pairing (i, i + n/2) and the color block of each pair.
struct PairStructure {
  int pairs = 0;
  int block = 0;  // colors per pair, pair i owns [i*block, (i+1)*block)
};

/// Recognizes the paired-agent family: n even, m = n*t/2, and every color of
/// block i is held only by agents i and i + n/2, both holding items.
/// Throws NotFamilyInstance otherwise.
PairStructure pair_structure(const Instance& inst);

/// True iff the optimal assignment hands each pair only colors of its own
/// block. Throws NotFamilyInstance for instances outside the family.
bool verify_pair_lemma(const Instance& inst);

namespace testing {
/// Adds `delta` to every cost optimal_assignment reports. Harness check only.
void set_oracle_cost_skew(Count delta);
}  // namespace testing

}  // namespace ringbalance

#endif  // RINGBALANCE_ORACLE_HPP_
