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

#ifndef RINGBALANCE_INSTANCES_HPP_
#define RINGBALANCE_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "ringbalance/model.hpp"

namespace ringbalance {

/// Each entry is nonzero with probability `density`, then uniform in
/// [1, p_max]. Throws BadParams.
Instance gen_random(int n, int m, Count p_max, double density, std::uint64_t seed);

/// Paired-agent family. Agent i is paired with i + n/2 and the pair owns the
/// color block [i*t, (i+1)*t). Within a block, `c_prime` lists the local
/// offsets of C'; the other t/2 offsets form C''.
struct FamilySpec {
  int n = 2;
  int t = 2;
  Count u = 2;
  /// Either one offset list shared by all pairs or one list per pair.
  std::vector<std::vector<int>> c_prime;
};

/// Offsets of C' for pair `pair`, sorted.
std::vector<int> family_c_prime(const FamilySpec& spec, int pair);

/// Q[j][i] = u on the block; the partner holds u on C' and u + 1 on C''.
Instance gen_family_I1(const FamilySpec& spec);
/// Q[j][i] = u on the block; the partner holds u on C' and u - 1 on C''.
Instance gen_family_I2(const FamilySpec& spec);

/// Optimal cost of an I1 instance: the first agent's items over all blocks.
Count family_I1_cost(const Instance& inst, const FamilySpec& spec);
/// Optimal cost of an I2 instance: the partner's items over all blocks.
Count family_I2_cost(const Instance& inst, const FamilySpec& spec);

/// Two agents per pair (2i, 2i+1) and two colors per pair, m = n:
///   Q[2i][2i]   = q(delta + eps/4)   Q[2i][2i+1]   = q(2 delta - eps/4)
///   Q[2i+1][2i] = q                  Q[2i+1][2i+1] = 0
struct TightSpec {
  int n = 2;
  Count q = 1;
  Rational delta = Rational(9, 10);
  Rational epsilon = Rational(1, 10);
  /// Require q*delta, q(delta + eps/4), q and q(2 delta - eps/4) to share one
  /// base-2 stage of the schedule built from the instance's largest weight.
  bool require_same_interval = true;
};

/// Throws BadParams, NonIntegralWeights or IntervalConditionUnsatisfiable.
Instance gen_tight(const TightSpec& spec);

/// (n/2) * q * (delta + eps/4).
Rational tight_optimal_cost(const TightSpec& spec);
/// 3 - 4 eps / (4 delta + eps).
Rational tight_ratio_formula(const Rational& delta, const Rational& epsilon);

}  // namespace ringbalance

#endif  // RINGBALANCE_INSTANCES_HPP_
