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

// Leader election and the estimate of p.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ringbalance/protocols.hpp"

namespace ringbalance {

std::string_view to_string(EngineKind kind) {
  return kind == EngineKind::Sync ? "sync" : "async";
}

std::string_view to_string(SelectionPolicy policy) {
  return policy == SelectionPolicy::HighestWeightFirst ? "highest-weight" : "lowest-index";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::Base: return "balance";
    case Variant::TwoApprox: return "two-approx";
    case Variant::EpsApprox: return "eps-approx";
    case Variant::Gather: return "gather";
  }
  return "?";
}

std::vector<std::uint64_t> election_ids(int n, const ProtocolConfig& config) {
  std::vector<std::uint64_t> ids = config.ids;
  if (ids.empty()) {
    ids.resize(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), std::uint64_t{1});
    std::mt19937_64 rng(config.seed ^ 0x5EEDull);
    std::shuffle(ids.begin(), ids.end(), rng);
  }
  if (ids.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidConfig, "need one id per agent");
  }
  if (config.leader) {
    const AgentIndex l = *config.leader;
    if (l < 0 || l >= n) throw Error(ErrorCode::InvalidConfig, "leader out of range");
    auto top = std::max_element(ids.begin(), ids.end());
    std::iter_swap(top, ids.begin() + l);
  }
  return ids;
}

namespace {

struct Probe {
  std::uint64_t id;
  int phase;
  std::int64_t hops;
};
struct Reply {
  std::uint64_t id;
  int phase;
};
struct Relabel {
  int label;
};

// Doubling-probe election. Every message is one label-sized unit.
class ElectionCore {
 public:
  using Payload = std::variant<Probe, Reply, Relabel>;

  ElectionCore(std::uint64_t id, int n) : id_(id), n_(n), unit_(bits::label(n)) {}

  template <class Ctx>
  void on_start(Ctx& ctx) {
    probe(ctx);
  }

  template <class Ctx>
  void on_message(Ctx& ctx, const Envelope<Payload>& e) {
    if (const auto* p = std::get_if<Probe>(&e.payload)) {
      if (p->id == id_) {
        if (label_ < 0) {
          label_ = 0;
          leader_ = true;
          ctx.send(Direction::Clockwise, Relabel{1}, unit_);
        }
      } else if (p->id > id_) {
        if (p->hops < (std::int64_t{1} << p->phase)) {
          ctx.send(e.dir, Probe{p->id, p->phase, p->hops + 1}, unit_);
        } else {
          ctx.send(opposite(e.dir), Reply{p->id, p->phase}, unit_);
        }
      }
    } else if (const auto* r = std::get_if<Reply>(&e.payload)) {
      if (r->id != id_) {
        ctx.send(e.dir, *r, unit_);
      } else if (r->phase == phase_ && ++replies_ == 2) {
        ++phase_;
        replies_ = 0;
        probe(ctx);
      }
    } else {
      const int v = std::get<Relabel>(e.payload).label;
      label_ = v;
      if (v + 1 < n_) ctx.send(Direction::Clockwise, Relabel{v + 1}, unit_);
    }
  }

  bool halted() const { return label_ >= 0; }
  int label() const { return label_; }
  bool leader() const { return leader_; }

 private:
  template <class Ctx>
  void probe(Ctx& ctx) {
    ctx.send(Direction::Clockwise, Probe{id_, phase_, 1}, unit_);
    ctx.send(Direction::CounterClockwise, Probe{id_, phase_, 1}, unit_);
  }

  std::uint64_t id_;
  int n_;
  int unit_;
  int phase_ = 0;
  int replies_ = 0;
  int label_ = -1;
  bool leader_ = false;
};

}  // namespace

ElectionResult leader_elect(std::span<const std::uint64_t> ids, const ProtocolConfig& config,
                            MessageAccounting& acct) {
  const int n = static_cast<int>(ids.size());
  if (std::set<std::uint64_t>(ids.begin(), ids.end()).size() != ids.size()) {
    throw Error(ErrorCode::DuplicateIds, "ring ids must be distinct");
  }
  ElectionResult out;
  out.labels.assign(ids.size(), 0);
  if (n == 1) return out;

  if (config.engine == EngineKind::Sync) {
    std::vector<RoundDriven<ElectionCore>> agents;
    agents.reserve(ids.size());
    for (auto id : ids) agents.emplace_back(id, n);
    out.time = run_sync(std::span(agents), acct,
                        SyncOptions{kPhaseElection, config.max_rounds, config.trace});
    for (AgentIndex i = 0; i < n; ++i) {
      out.labels[i] = agents[i].core().label();
      if (agents[i].core().leader()) out.leader = i;
    }
    return out;
  }
  std::vector<ElectionCore> agents;
  agents.reserve(ids.size());
  for (auto id : ids) agents.emplace_back(id, n);
  out.time = run_async(std::span(agents), acct, config.delay,
                       AsyncOptions{kPhaseElection, config.max_events, config.trace, 1})
                 .elapsed;
  for (AgentIndex i = 0; i < n; ++i) {
    out.labels[i] = agents[i].label();
    if (agents[i].leader()) out.leader = i;
  }
  return out;
}

bool speak_up(Count p_i, int r) {
  if (r == 0) return p_i <= 1;
  if (r >= 62) return p_i >= (Count{1} << r);
  return p_i >= (Count{1} << r) && p_i < (Count{1} << (r + 1));
}

namespace {

struct Tally {
  Count value;
};
struct Finish {
  int ell;
};

// Stage r occupies rounds [r*n, (r+1)*n). The agent with label i acts at
// r*n + i and passes the running count on when it is positive.
class SyncEstimateAgent {
 public:
  using Payload = std::variant<Tally, Finish>;

  SyncEstimateAgent(int label, int n, Count p_i) : label_(label), n_(n), p_(p_i), wake_(label) {}

  void on_round(RoundContext<Payload>& ctx) {
    if (done_ || ctx.round() != wake_) {
      if (!ctx.inbox().empty()) {
        throw Error(ErrorCode::DesyncDetected, "estimate message outside schedule");
      }
      return;
    }
    const auto inbox = ctx.inbox();
    if (inbox.size() > 1) throw Error(ErrorCode::DesyncDetected, "two estimate messages");
    Count carried = 0;
    if (!inbox.empty()) {
      if (const auto* f = std::get_if<Finish>(&inbox[0].payload)) {
        finish(ctx, f->ell);
        return;
      }
      carried = std::get<Tally>(inbox[0].payload).value;
    }
    if (label_ == 0) {
      if (r_ > 0) {
        total_ += carried;
        if (total_ >= n_) {
          finish(ctx, r_ - 1);
          return;
        }
      }
      if (r_ > 62) throw Error(ErrorCode::Stall, "estimate did not converge");
      carried = 0;
    }
    if (speak_up(p_, r_)) {
      ++carried;
      speak_stage_ = r_;
      ++speak_count_;
    }
    if (carried > 0) ctx.send(Direction::Clockwise, Tally{carried}, bits::counter(n_));
    ++r_;
    wake_ = static_cast<std::int64_t>(r_) * n_ + label_;
  }

  bool halted() const { return done_; }
  int ell() const { return ell_; }
  int speak_stage() const { return speak_stage_; }
  int speak_count() const { return speak_count_; }

 private:
  void finish(RoundContext<Payload>& ctx, int ell) {
    ell_ = ell;
    done_ = true;
    if (label_ + 1 < n_) {
      ctx.send(Direction::Clockwise, Finish{ell}, bits::weight(ell));
    }
  }

  int label_;
  int n_;
  Count p_;
  std::int64_t wake_;
  int r_ = 0;
  Count total_ = 0;
  int ell_ = -1;
  int speak_stage_ = -1;
  int speak_count_ = 0;
  bool done_ = false;
};

struct RunningMax {
  Count value;
  int pass;
};

class AsyncEstimateAgent {
 public:
  using Payload = RunningMax;

  AsyncEstimateAgent(int label, Count p_i) : label_(label), p_(p_i) {}

  void on_start(EventContext<Payload>& ctx) {
    if (label_ == 0) ctx.send(Direction::Clockwise, RunningMax{p_, 1}, bits::weight(p_));
  }

  void on_message(EventContext<Payload>& ctx, const Envelope<Payload>& e) {
    const RunningMax msg = e.payload;
    if (label_ == 0) {
      if (msg.pass == 1) {
        known_ = msg.value;
        ctx.send(Direction::Clockwise, RunningMax{msg.value, 2}, bits::weight(msg.value));
      } else if (msg.value != known_) {
        throw Error(ErrorCode::DesyncDetected, "maximum changed on the second pass");
      }
      return;
    }
    if (msg.pass == 1) {
      const Count v = std::max(msg.value, p_);
      ctx.send(Direction::Clockwise, RunningMax{v, 1}, bits::weight(v));
    } else {
      known_ = msg.value;
      ctx.send(Direction::Clockwise, msg, bits::weight(msg.value));
    }
  }

  bool halted() const { return known_ >= 0; }
  Count known() const { return known_; }

 private:
  int label_;
  Count p_;
  Count known_ = -1;
};

int ell_of(Count p) { return floor_log2(static_cast<std::uint64_t>(std::max<Count>(p, 1))); }

}  // namespace

EstimateResult phase2_sync(const Instance& inst, std::span<const int> labels,
                           const ProtocolConfig& config, MessageAccounting& acct) {
  const int n = inst.agents();
  EstimateResult out;
  out.speak_stage.assign(static_cast<std::size_t>(n), -1);
  out.speak_count.assign(static_cast<std::size_t>(n), 0);
  if (n == 1) {
    out.ell = ell_of(inst.agent_max(0));
    out.p_hat = Count{1} << (out.ell + 1);
    out.speak_stage[0] = out.ell;
    out.speak_count[0] = 1;
    return out;
  }
  std::vector<SyncEstimateAgent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (AgentIndex a = 0; a < n; ++a) agents.emplace_back(labels[a], n, inst.agent_max(a));
  out.time = run_sync(std::span(agents), acct,
                      SyncOptions{kPhaseEstimate, config.max_rounds, config.trace});
  out.ell = agents[0].ell();
  for (AgentIndex a = 0; a < n; ++a) {
    if (agents[a].ell() != out.ell) throw Error(ErrorCode::DesyncDetected, "estimates differ");
    out.speak_stage[a] = agents[a].speak_stage();
    out.speak_count[a] = agents[a].speak_count();
  }
  out.p_hat = Count{1} << (out.ell + 1);
  return out;
}

EstimateResult phase2_async(const Instance& inst, std::span<const int> labels,
                            const ProtocolConfig& config, MessageAccounting& acct) {
  const int n = inst.agents();
  EstimateResult out;
  Count p = inst.agent_max(0);
  if (n > 1) {
    std::vector<AsyncEstimateAgent> agents;
    agents.reserve(static_cast<std::size_t>(n));
    for (AgentIndex a = 0; a < n; ++a) agents.emplace_back(labels[a], inst.agent_max(a));
    out.time = run_async(std::span(agents), acct, config.delay,
                         AsyncOptions{kPhaseEstimate, config.max_events, config.trace, 2})
                   .elapsed;
    p = agents[0].known();
    for (const auto& a : agents) {
      if (a.known() != p) throw Error(ErrorCode::DesyncDetected, "maxima differ");
    }
  }
  out.p_observed = p;
  out.ell = ell_of(p);
  out.p_hat = Count{1} << (out.ell + 1);
  return out;
}

}  // namespace ringbalance
