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

// Gather-at-leader baseline. The column of label i travels n - i hops
// clockwise to the leader, which solves the instance exactly and sends the
// plan once around the ring.

#include "balance_impl.hpp"
#include "ringbalance/oracle.hpp"
#include "ringbalance/variants.hpp"

namespace ringbalance {
namespace {

struct Column {
  int origin;  // label; implied by arrival order, not charged
  std::vector<Count> weights;
};
struct Plan {
  std::vector<int> owner;  // label per color
};

class GatherAgent {
 public:
  using Payload = std::variant<Column, Plan>;

  GatherAgent(int label, int n, std::vector<Count> weights, int weight_bits)
      : label_(label),
        n_(n),
        weights_(std::move(weights)),
        column_bits_(static_cast<std::int64_t>(weights_.size()) * weight_bits),
        table_(static_cast<std::size_t>(n)) {}

  template <class Ctx>
  void on_start(Ctx& ctx) {
    if (label_ == 0) {
      table_[0] = weights_;
      if (n_ == 1) decide(ctx);
    } else {
      ctx.send(Direction::Clockwise, Column{label_, weights_}, column_bits_);
    }
  }

  template <class Ctx>
  void on_message(Ctx& ctx, const Envelope<Payload>& e) {
    if (const auto* c = std::get_if<Column>(&e.payload)) {
      if (label_ != 0) {
        ctx.send(Direction::Clockwise, *c, column_bits_);
        return;
      }
      table_.at(c->origin) = c->weights;
      if (++received_ == n_ - 1) decide(ctx);
      return;
    }
    const Plan& plan = std::get<Plan>(e.payload);
    owner_ = plan.owner;
    done_ = true;
    if (label_ + 1 < n_) ctx.send(Direction::Clockwise, plan, plan_bits());
  }

  bool halted() const { return done_; }
  const std::vector<int>& owner() const { return owner_; }

 private:
  std::int64_t plan_bits() const {
    return static_cast<std::int64_t>(weights_.size()) * bits::label(n_);
  }

  template <class Ctx>
  void decide(Ctx& ctx) {
    const int m = static_cast<int>(weights_.size());
    std::vector<Count> flat(static_cast<std::size_t>(m) * n_);
    for (int l = 0; l < n_; ++l) {
      for (ColorIndex j = 0; j < m; ++j) flat[static_cast<std::size_t>(j) * n_ + l] = table_[l][j];
    }
    const Solution s = optimal_assignment(Instance(n_, m, std::move(flat)));
    owner_ = s.assignment.pi;
    done_ = true;
    if (n_ > 1) ctx.send(Direction::Clockwise, Plan{owner_}, plan_bits());
  }

  int label_;
  int n_;
  std::vector<Count> weights_;
  std::int64_t column_bits_;
  std::vector<std::vector<Count>> table_;
  int received_ = 0;
  std::vector<int> owner_;
  bool done_ = false;
};

}  // namespace

RunResult run_gather_baseline(const Instance& inst, const ProtocolConfig& config) {
  const int n = inst.agents();
  MessageAccounting acct(n);
  RunResult out;
  const auto ids = election_ids(n, config);
  const ElectionResult election = leader_elect(ids, config, acct);
  out.leader = election.leader;
  out.labels = election.labels;
  out.metrics.time_per_phase[kPhaseElection] = election.time;

  const int weight_bits = bits::weight(inst.max_weight());
  std::vector<AgentIndex> agent_of_label(static_cast<std::size_t>(n));
  for (AgentIndex a = 0; a < n; ++a) agent_of_label[out.labels[a]] = a;

  std::vector<int> owner;
  if (n == 1) {
    owner.assign(static_cast<std::size_t>(inst.colors()), 0);
  } else if (config.engine == EngineKind::Sync) {
    std::vector<RoundDriven<GatherAgent>> agents;
    agents.reserve(static_cast<std::size_t>(n));
    for (AgentIndex a = 0; a < n; ++a) {
      agents.emplace_back(out.labels[a], n, inst.column(a), weight_bits);
    }
    out.metrics.time_per_phase[kPhaseGather] = run_sync(
        std::span(agents), acct, SyncOptions{kPhaseGather, config.max_rounds, config.trace});
    owner = agents[agent_of_label[0]].core().owner();
  } else {
    std::vector<GatherAgent> agents;
    agents.reserve(static_cast<std::size_t>(n));
    for (AgentIndex a = 0; a < n; ++a) {
      agents.emplace_back(out.labels[a], n, inst.column(a), weight_bits);
    }
    out.metrics.time_per_phase[kPhaseGather] =
        run_async(std::span(agents), acct, config.delay,
                  AsyncOptions{kPhaseGather, config.max_events, config.trace, 4})
            .elapsed;
    owner = agents[agent_of_label[0]].owner();
  }
  out.assignment.pi.resize(owner.size());
  for (std::size_t j = 0; j < owner.size(); ++j) out.assignment.pi[j] = agent_of_label[owner[j]];
  detail::fill_totals(out.metrics, acct);
  return out;
}

}  // namespace ringbalance
