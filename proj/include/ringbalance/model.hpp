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

// Problem data model: instances, balanced assignments, quotas, stage
// intervals and the relocation cost.

#ifndef RINGBALANCE_MODEL_HPP_
#define RINGBALANCE_MODEL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringbalance/common.hpp"

namespace ringbalance {

/// Throws Error(NegativeCount | FewerColorsThanAgents | ShapeMismatch) when
/// `counts` (row-major, m rows of n entries) does not describe an instance.
void validate_instance(int n, int m, std::span<const Count> counts);

/// n agents on a ring and m colors; entry (j, i) is the number of items of
/// color j held by agent i. Immutable once constructed.
class Instance {
 public:
  Instance(int n, int m, std::vector<Count> counts);

  /// rows[j][i] = items of color j at agent i.
  static Instance from_rows(int n, const std::vector<std::vector<Count>>& rows);

  int agents() const noexcept { return n_; }
  int colors() const noexcept { return m_; }

  Count operator()(ColorIndex j, AgentIndex i) const noexcept {
    return counts_[static_cast<std::size_t>(j) * n_ + i];
  }

  std::span<const Count> row(ColorIndex j) const noexcept {
    return {counts_.data() + static_cast<std::size_t>(j) * n_,
            static_cast<std::size_t>(n_)};
  }

  /// The local view of agent i: its count for every color.
  std::vector<Count> column(AgentIndex i) const;

  /// p_i: largest count held by agent i.
  Count agent_max(AgentIndex i) const;
  /// p: largest count anywhere.
  Count max_weight() const;
  Count total_items() const;

  std::span<const Count> data() const noexcept { return counts_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int n_;
  int m_;
  std::vector<Count> counts_;
};

/// pi[j] is the agent that receives color j.
struct Assignment {
  std::vector<AgentIndex> pi;

  std::vector<int> degrees(int n) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// g = (floor(m/n) + 1) * n - m: agents with label below g get floor(m/n).
int quota_pivot(int n, int m);
int quota(AgentIndex i, int n, int m);
std::vector<int> quotas(int n, int m);

/// True iff `a` is total on [0, m), maps into [0, n), and exactly g agents
/// receive floor(m/n) colors while the rest receive floor(m/n) + 1.
bool is_balanced(const Assignment& a, const Instance& inst);

/// Items that have to move: sum over colors of the items held by agents
/// other than the assignee.
Count cost(const Assignment& a, const Instance& inst);

/// Items that stay put: sum over colors of the assignee's own count.
Count kept_weight(const Assignment& a, const Instance& inst);

/// Half-open weight interval [lo, hi) considered by one assignment stage;
/// hi == nullopt means unbounded above.
struct StageInterval {
  Count lo = 0;
  std::optional<Count> hi;
  int r = 0;
  Rational base;

  bool contains(Count w) const noexcept { return w >= lo && (!hi || w < *hi); }

  friend bool operator==(const StageInterval&, const StageInterval&) = default;
};

/// The stage schedule for upper estimate `p_hat` and shrink factor `base`.
/// Thresholds are t_r = {p_hat / base^r} where {x} = ceil(x) if x > 1/base
/// and 0 otherwise; stage 0 is [t_1, inf), stage r is [t_{r+1}, t_r), and
/// the schedule ends with [0, 1). Empty intervals produced by the rounding
/// are dropped and the remaining stages renumbered. With base 2 and p_hat a
/// power of two this is [p/2, inf), [p/4, p/2), ..., [1, 2), [0, 1).
/// Throws InvalidBase for base <= 1 and InvalidArgument for p_hat < base.
std::vector<StageInterval> stage_intervals(Count p_hat, const Rational& base);

/// Index of the interval containing w.
int stage_of_weight(std::span<const StageInterval> schedule, Count w);

/// Upper estimate used by the assignment stages: 2^(floor(log2 max(p,1)) + 1).
Count power_of_two_estimate(Count p);

/// cost_alg / cost_opt; 1 when both are zero, infinite when only cost_opt is.
struct Ratio {
  Rational value;
  bool infinite = false;

  double to_double() const;
  std::string str() const;
};

Ratio approximation_ratio(Count cost_alg, Count cost_opt);

}  // namespace ringbalance

#endif  // RINGBALANCE_MODEL_HPP_
