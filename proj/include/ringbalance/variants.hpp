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

#ifndef RINGBALANCE_VARIANTS_HPP_
#define RINGBALANCE_VARIANTS_HPP_

#include "ringbalance/protocols.hpp"

namespace ringbalance {

/// Balance where each stage's colors go to the in-interval holder with the
/// most items that still has quota. Claims carry (color, weight, label).
RunResult run_two_approx(const Instance& inst, const ProtocolConfig& config);

/// Balance with intervals shrinking by 1 + epsilon. Throws InvalidEpsilon
/// unless 0 < epsilon < 1.
RunResult run_eps_approx(const Instance& inst, const Rational& epsilon,
                         const ProtocolConfig& config);

/// Every agent ships its whole column to the leader hop by hop; the leader
/// solves the instance exactly and broadcasts the assignment.
RunResult run_gather_baseline(const Instance& inst, const ProtocolConfig& config);

/// Dispatches on config.variant.
RunResult run_protocol(const Instance& inst, const ProtocolConfig& config);

}  // namespace ringbalance

#endif  // RINGBALANCE_VARIANTS_HPP_
