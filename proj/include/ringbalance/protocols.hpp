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

// The Balance protocols as ring agents. A run is three phases, each executed
// as its own engine run on the same ring:
//
//   1. leader election (bidirectional doubling probes, maximum id wins),
//      followed by a clockwise relabel pass so that every agent learns its
//      distance from the leader;
//   2. estimation of the largest count p: staged speak-up counting on a
//      synchronous ring, two max-circulations on an asynchronous one;
//   3. staged greedy assignment over geometrically shrinking weight
//      intervals until every color has an owner.
//
// Agents only read their own column of the instance; everything else they
// learn from messages.

#ifndef RINGBALANCE_PROTOCOLS_HPP_
#define RINGBALANCE_PROTOCOLS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringbalance/model.hpp"
#include "ringbalance/sim.hpp"

namespace ringbalance {

enum class EngineKind { Sync, Async };

/// Order in which an agent picks among its candidate colors.
enum class SelectionPolicy {
  HighestWeightFirst,  // weight descending, then color index ascending
  LowestIndexFirst,
};

enum class Variant { Base, TwoApprox, EpsApprox, Gather };

std::string_view to_string(EngineKind kind);
std::string_view to_string(SelectionPolicy policy);
std::string_view to_string(Variant variant);

struct ProtocolConfig {
  EngineKind engine = EngineKind::Sync;
  Variant variant = Variant::Base;
  SelectionPolicy policy = SelectionPolicy::HighestWeightFirst;
  /// Ring ids per agent. Empty: a seeded permutation of 1..n.
  std::vector<std::uint64_t> ids;
  /// Forces this agent to win the election by giving it the largest id.
  std::optional<AgentIndex> leader;
  std::uint64_t seed = 1;
  DelayModel delay = DelayModel::unit();
  /// Interval shrink factor is 1 + epsilon for Variant::EpsApprox.
  Rational epsilon = Rational(1, 2);
  std::int64_t max_rounds = 50'000'000;
  std::int64_t max_events = 50'000'000;
  TraceSink trace;
};

/// Ids used for the election under `config`.
std::vector<std::uint64_t> election_ids(int n, const ProtocolConfig& config);

struct ElectionResult {
  AgentIndex leader = 0;
  /// labels[agent] = clockwise distance from the leader.
  std::vector<int> labels;
  std::int64_t time = 0;
};

/// Phase 1. Throws DuplicateIds.
ElectionResult leader_elect(std::span<const std::uint64_t> ids, const ProtocolConfig& config,
                            MessageAccounting& acct);

/// B_i(r) with stage 0 covering p_i in {0, 1}.
bool speak_up(Count p_i, int r);

struct EstimateResult {
  int ell = 0;
  Count p_hat = 2;                     // 2^(ell+1)
  std::optional<Count> p_observed;     // exact p, asynchronous variant only
  std::vector<int> speak_stage;        // per agent, synchronous variant only
  std::vector<int> speak_count;        // per agent, synchronous variant only
  std::int64_t time = 0;
};

/// Phase 2 on a synchronous ring: staged speak-up counting.
EstimateResult phase2_sync(const Instance& inst, std::span<const int> labels,
                           const ProtocolConfig& config, MessageAccounting& acct);

/// Phase 2 on an asynchronous ring: a running-max circulation followed by a
/// dissemination circulation. Agents derive the same power-of-two estimate
/// as the synchronous variant from the exact maximum.
EstimateResult phase2_async(const Instance& inst, std::span<const int> labels,
                            const ProtocolConfig& config, MessageAccounting& acct);

/// How a stage distributes its in-interval colors.
enum class StageRule {
  Greedy,        // agents claim in ring order from the leader
  HeaviestHolder // all claims collected, each color to the heaviest holder with quota
};

struct StageRecord {
  int r = 0;
  StageInterval interval;
  bool step_two = false;
  int originator = -1;          // label of the first agent with candidates (sync)
  int colors_assigned = 0;      // K_r
  std::int64_t units = 0;
  std::int64_t start_time = 0;  // round at which every agent began the stage (sync)
};

/// One decision of the heaviest-holder rule.
struct AwardRecord {
  int r = 0;
  ColorIndex color = 0;
  AgentIndex winner = 0;
  /// Claimants (agent, weight) that still had quota when the color was decided.
  std::vector<std::pair<AgentIndex, Count>> eligible;
};

struct AssignResult {
  Assignment assignment;
  std::vector<int> stage_of_color;
  std::vector<StageRecord> stages;
  std::vector<AwardRecord> awards;
  std::int64_t time = 0;
};

/// Phase 3 over `schedule`. Throws DesyncDetected when agents of a
/// synchronous run disagree on stage boundaries or receive a message outside
/// their schedule, and Stall when colors remain after the last stage.
AssignResult run_assignment(const Instance& inst, std::span<const int> labels,
                            std::span<const StageInterval> schedule, StageRule rule,
                            const ProtocolConfig& config, MessageAccounting& acct);

struct RunMetrics {
  std::int64_t units_total = 0;
  std::int64_t messages = 0;
  std::map<std::string, std::int64_t> units_per_phase;
  std::int64_t time_units = 0;
  std::map<std::string, std::int64_t> time_per_phase;
  std::vector<StageRecord> stages;
};

struct RunResult {
  Assignment assignment;
  RunMetrics metrics;
  AgentIndex leader = 0;
  std::vector<int> labels;
  EstimateResult estimate;
  std::vector<StageInterval> schedule;
  std::vector<int> stage_of_color;
  std::vector<AwardRecord> awards;
};

/// Phase labels used in RunMetrics.
inline constexpr const char* kPhaseElection = "phase1";
inline constexpr const char* kPhaseEstimate = "phase2";
inline constexpr const char* kPhaseAssign = "phase3";
inline constexpr const char* kPhaseGather = "gather";

/// Phases 1-3 with the greedy rule and base-2 intervals.
RunResult run_balance(const Instance& inst, const ProtocolConfig& config);

}  // namespace ringbalance

#endif  // RINGBALANCE_PROTOCOLS_HPP_
