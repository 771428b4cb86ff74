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

#include "ringbalance/protocols.hpp"
#include "ringbalance/variants.hpp"
#include "balance_impl.hpp"

namespace ringbalance {
namespace detail {

RunResult run_staged(const Instance& inst, const ProtocolConfig& config, const Rational& base,
                     StageRule rule) {
  const int n = inst.agents();
  MessageAccounting acct(n);
  RunResult out;

  const auto ids = election_ids(n, config);
  const ElectionResult election = leader_elect(ids, config, acct);
  out.leader = election.leader;
  out.labels = election.labels;
  out.metrics.time_per_phase[kPhaseElection] = election.time;

  out.estimate = config.engine == EngineKind::Sync ? phase2_sync(inst, out.labels, config, acct)
                                                   : phase2_async(inst, out.labels, config, acct);
  out.metrics.time_per_phase[kPhaseEstimate] = out.estimate.time;

  out.schedule = stage_intervals(out.estimate.p_hat, base);
  AssignResult assign = run_assignment(inst, out.labels, out.schedule, rule, config, acct);
  out.metrics.time_per_phase[kPhaseAssign] = assign.time;

  out.assignment = std::move(assign.assignment);
  out.stage_of_color = std::move(assign.stage_of_color);
  out.awards = std::move(assign.awards);
  out.metrics.stages = std::move(assign.stages);
  fill_totals(out.metrics, acct);
  return out;
}

void fill_totals(RunMetrics& metrics, const MessageAccounting& acct) {
  metrics.units_total = acct.total_units();
  metrics.messages = acct.messages();
  metrics.units_per_phase = acct.per_phase();
  metrics.time_units = 0;
  for (const auto& [phase, t] : metrics.time_per_phase) metrics.time_units += t;
}

}  // namespace detail

RunResult run_balance(const Instance& inst, const ProtocolConfig& config) {
  return detail::run_staged(inst, config, Rational(2), StageRule::Greedy);
}

RunResult run_two_approx(const Instance& inst, const ProtocolConfig& config) {
  return detail::run_staged(inst, config, Rational(2), StageRule::HeaviestHolder);
}

RunResult run_eps_approx(const Instance& inst, const Rational& epsilon,
                         const ProtocolConfig& config) {
  if (epsilon <= 0 || epsilon >= 1) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1), got " + to_string(epsilon));
  }
  return detail::run_staged(inst, config, 1 + epsilon, StageRule::Greedy);
}

RunResult run_protocol(const Instance& inst, const ProtocolConfig& config) {
  switch (config.variant) {
    case Variant::Base: return run_balance(inst, config);
    case Variant::TwoApprox: return run_two_approx(inst, config);
    case Variant::EpsApprox: return run_eps_approx(inst, config.epsilon, config);
    case Variant::Gather: return run_gather_baseline(inst, config);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown variant");
}

}  // namespace ringbalance
