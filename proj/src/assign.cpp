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

// Staged color assignment.
//
// Synchronous timing for the agent with label i in a stage starting at S:
//
//   S + i        look at the label message from i-1, or originate one if
//                there are candidates; otherwise wait.
//   S + i + n    a waiting agent checks for a late label message k > i.
//                None means every agent skips to the stage at S + 2n.
//   T + i        with T = S + n + k - 1: extend the claim list.
//   T + n + i    receive the complete list and forward it; the next stage
//                starts at T + 2n.
//
// Silence carries information: an agent that expects a message and gets
// none knows the list it would have carried is empty.

#include <algorithm>
#include <map>
#include <numeric>

#include "ringbalance/protocols.hpp"

namespace ringbalance {
namespace {

struct StageBid {
  ColorIndex color;
  Count weight;
  int label;
};

struct LabelMsg {
  int k;
};
struct FlagMsg {
  bool any;
  int pass;
};
struct ClaimMsg {
  std::vector<ColorIndex> colors;
};
struct BidMsg {
  std::vector<StageBid> bids;
};
struct FinalMsg {
  std::vector<ColorIndex> colors;
  std::vector<int> owners;  // labels; heaviest-holder rule only
};

using AssignPayload = std::variant<LabelMsg, FlagMsg, ClaimMsg, BidMsg, FinalMsg>;

struct Shared {
  int n = 0;
  int m = 0;
  std::span<const StageInterval> schedule;
  StageRule rule = StageRule::Greedy;
  SelectionPolicy policy = SelectionPolicy::HighestWeightFirst;
  int color_bits = 1;
  int label_bits = 1;
  int weight_bits = 1;
};

struct LeaderStageLog {
  int r = 0;
  std::int64_t start = 0;
  bool step_two = false;
  int originator = -1;
  int assigned = 0;
};

// Local knowledge of one agent, independent of the engine.
class AssignCore {
 public:
  AssignCore(const Shared& shared, int label, std::vector<Count> weights)
      : s_(&shared),
        label_(label),
        weights_(std::move(weights)),
        assigned_(static_cast<std::size_t>(shared.m), 0),
        stage_of_color_(static_cast<std::size_t>(shared.m), -1),
        degree_(static_cast<std::size_t>(shared.n), 0) {}

  int label() const { return label_; }
  bool leader() const { return label_ == 0; }
  int n() const { return s_->n; }
  int stages() const { return static_cast<int>(s_->schedule.size()); }
  bool all_assigned() const { return assigned_count_ == s_->m; }
  int spare(int label) const { return quota(label, s_->n, s_->m) - degree_[label]; }

  std::vector<ColorIndex> candidates(int r) const {
    std::vector<ColorIndex> out;
    const auto& iv = s_->schedule[r];
    for (ColorIndex j = 0; j < s_->m; ++j) {
      if (!assigned_[j] && iv.contains(weights_[j])) out.push_back(j);
    }
    return out;
  }

  // Greedy rule: append own picks to the claim list.
  void extend_claims(const std::vector<ColorIndex>& cands, std::vector<ColorIndex>& claims) {
    std::vector<ColorIndex> open;
    for (ColorIndex j : cands) {
      if (std::find(claims.begin(), claims.end(), j) == claims.end()) open.push_back(j);
    }
    order(open);
    const int take = std::min<int>(spare(label_), static_cast<int>(open.size()));
    claims.insert(claims.end(), open.begin(), open.begin() + take);
  }

  // Heaviest-holder rule: every candidate becomes a bid while quota is left.
  void extend_bids(const std::vector<ColorIndex>& cands, std::vector<StageBid>& bids) const {
    if (spare(label_) <= 0) return;
    for (ColorIndex j : cands) bids.push_back(StageBid{j, weights_[j], label_});
  }

  // Leader only: decides the bids of one stage.
  FinalMsg resolve(const std::vector<StageBid>& bids, int r, std::vector<AwardRecord>& log,
                   std::span<const AgentIndex> agent_of_label) const {
    std::map<ColorIndex, std::vector<StageBid>> by_color;
    for (const auto& b : bids) by_color[b.color].push_back(b);
    std::vector<std::pair<Count, ColorIndex>> order;
    for (const auto& [c, list] : by_color) {
      Count best = 0;
      for (const auto& b : list) best = std::max(best, b.weight);
      order.emplace_back(best, c);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<int> left(static_cast<std::size_t>(s_->n));
    for (int l = 0; l < s_->n; ++l) left[l] = spare(l);
    FinalMsg out;
    for (const auto& [best, c] : order) {
      AwardRecord rec;
      rec.r = r;
      rec.color = c;
      const StageBid* win = nullptr;
      for (const auto& b : by_color[c]) {
        if (left[b.label] <= 0) continue;
        rec.eligible.emplace_back(agent_of_label[b.label], b.weight);
        if (!win || b.weight > win->weight || (b.weight == win->weight && b.label < win->label)) {
          win = &b;
        }
      }
      if (!win) continue;
      --left[win->label];
      rec.winner = agent_of_label[win->label];
      log.push_back(std::move(rec));
      out.colors.push_back(c);
      out.owners.push_back(win->label);
    }
    return out;
  }

  // Applies the complete list of a stage. Under the greedy rule own claims
  // were recorded when they were made.
  void apply(const FinalMsg& f, int r) {
    for (std::size_t k = 0; k < f.colors.size(); ++k) {
      const ColorIndex c = f.colors[k];
      if (assigned_[c]) throw Error(ErrorCode::DesyncDetected, "color assigned twice");
      assigned_[c] = 1;
      stage_of_color_[c] = r;
      ++assigned_count_;
      if (!f.owners.empty()) {
        ++degree_[f.owners[k]];
        if (f.owners[k] == label_) owned_.push_back(c);
      }
    }
    if (f.owners.empty()) {
      for (ColorIndex c : pending_) {
        if (!assigned_[c]) throw Error(ErrorCode::DesyncDetected, "claim missing from list");
        owned_.push_back(c);
      }
      degree_[label_] += static_cast<int>(pending_.size());
    }
    pending_.clear();
  }

  void claim(std::vector<ColorIndex> mine) { pending_ = std::move(mine); }

  const std::vector<ColorIndex>& owned() const { return owned_; }
  const std::vector<int>& stage_of_color() const { return stage_of_color_; }
  const Shared& shared() const { return *s_; }

 private:
  void order(std::vector<ColorIndex>& colors) const {
    if (s_->policy == SelectionPolicy::HighestWeightFirst) {
      std::stable_sort(colors.begin(), colors.end(), [this](ColorIndex a, ColorIndex b) {
        return weights_[a] != weights_[b] ? weights_[a] > weights_[b] : a < b;
      });
    } else {
      std::sort(colors.begin(), colors.end());
    }
  }

  const Shared* s_;
  int label_;
  std::vector<Count> weights_;
  std::vector<char> assigned_;
  std::vector<int> stage_of_color_;
  std::vector<int> degree_;  // by label
  int assigned_count_ = 0;
  std::vector<ColorIndex> owned_;
  std::vector<ColorIndex> pending_;
};

// Work list carried in Step 2 for either rule.
struct Carried {
  std::vector<ColorIndex> claims;
  std::vector<StageBid> bids;
  bool empty() const { return claims.empty() && bids.empty(); }
};

std::int64_t list_bits(const Shared& s, const Carried& c) {
  if (s.rule == StageRule::Greedy) {
    return static_cast<std::int64_t>(c.claims.size()) * s.color_bits;
  }
  return static_cast<std::int64_t>(c.bids.size()) * (s.color_bits + s.weight_bits + s.label_bits);
}

std::int64_t final_bits(const Shared& s, const FinalMsg& f) {
  const std::int64_t per = s.color_bits + (f.owners.empty() ? 0 : s.label_bits);
  return static_cast<std::int64_t>(f.colors.size()) * per;
}

AssignPayload carried_payload(const Shared& s, Carried c) {
  if (s.rule == StageRule::Greedy) return ClaimMsg{std::move(c.claims)};
  return BidMsg{std::move(c.bids)};
}

Carried read_carried(const AssignPayload& p) {
  if (const auto* c = std::get_if<ClaimMsg>(&p)) return Carried{c->colors, {}};
  if (const auto* b = std::get_if<BidMsg>(&p)) return Carried{{}, b->bids};
  throw Error(ErrorCode::DesyncDetected, "expected a claim list");
}

class SyncAssignAgent {
 public:
  using Payload = AssignPayload;

  SyncAssignAgent(AssignCore core, std::span<const AgentIndex> agent_of_label)
      : core_(std::move(core)), agent_of_label_(agent_of_label), wake_(core_.label()) {
    if (core_.all_assigned()) done_ = true;
  }

  void on_round(RoundContext<Payload>& ctx) {
    const auto inbox = ctx.inbox();
    std::size_t used = 0;
    auto take = [&]() -> const Envelope<Payload>* {
      return used < inbox.size() ? &inbox[used++] : nullptr;
    };
    while (!done_ && ctx.round() == wake_) step(ctx, take);
    if (used < inbox.size()) {
      throw Error(ErrorCode::DesyncDetected, "agent " + std::to_string(ctx.self()) +
                                                 " got an unexpected message at round " +
                                                 std::to_string(ctx.round()));
    }
  }

  bool halted() const { return done_; }
  const AssignCore& core() const { return core_; }
  const std::vector<LeaderStageLog>& log() const { return log_; }
  const std::vector<AwardRecord>& awards() const { return awards_; }

 private:
  enum class Step { Look, Check, Extend, Collect };

  template <class Take>
  void step(RoundContext<Payload>& ctx, Take& take) {
    const int i = core_.label();
    const int n = core_.n();
    const Shared& s = core_.shared();
    switch (step_) {
      case Step::Look: {
        log_.push_back(LeaderStageLog{r_, start_, false, -1, 0});
        cands_ = core_.candidates(r_);
        if (const auto* e = take()) {
          const int k = expect<LabelMsg>(*e).k;
          if ((i + 1) % n != k) ctx.send(Direction::Clockwise, LabelMsg{k}, s.label_bits, r_);
          begin_step_two(k);
        } else if (!cands_.empty()) {
          ctx.send(Direction::Clockwise, LabelMsg{i}, s.label_bits, r_);
          begin_step_two(i);
        } else {
          step_ = Step::Check;
          wake_ = start_ + i + n;
        }
        break;
      }
      case Step::Check: {
        if (const auto* e = take()) {
          const int k = expect<LabelMsg>(*e).k;
          if (k - i - 1 > 0) ctx.send(Direction::Clockwise, LabelMsg{k}, s.label_bits, r_);
          begin_step_two(k);
        } else {
          next_stage(start_ + 2 * static_cast<std::int64_t>(n));
        }
        break;
      }
      case Step::Extend: {
        Carried list;
        if (const auto* e = take()) {
          if (i == 0) throw Error(ErrorCode::DesyncDetected, "leader received a list early");
          list = read_carried(e->payload);
        }
        if (s.rule == StageRule::Greedy) {
          const std::size_t before = list.claims.size();
          core_.extend_claims(cands_, list.claims);
          core_.claim({list.claims.begin() + static_cast<std::ptrdiff_t>(before), list.claims.end()});
        } else {
          core_.extend_bids(cands_, list.bids);
        }
        if (!list.empty()) {
          const auto bits = list_bits(s, list);
          ctx.send(Direction::Clockwise, carried_payload(s, std::move(list)), bits, r_);
        }
        step_ = Step::Collect;
        wake_ = step_two_ + n + i;
        break;
      }
      case Step::Collect: {
        FinalMsg final_list;
        const auto* e = take();
        if (i == 0) {
          Carried list = e ? read_carried(e->payload) : Carried{};
          if (s.rule == StageRule::Greedy) {
            final_list.colors = std::move(list.claims);
          } else {
            final_list = core_.resolve(list.bids, r_, awards_, agent_of_label_);
          }
          log_.back().assigned = static_cast<int>(final_list.colors.size());
        } else if (e) {
          final_list = expect<FinalMsg>(*e);
        }
        if (!final_list.colors.empty() && i + 1 < n) {
          ctx.send(Direction::Clockwise, final_list, final_bits(s, final_list), r_);
        }
        core_.apply(final_list, r_);
        next_stage(step_two_ + 2 * static_cast<std::int64_t>(n));
        break;
      }
    }
  }

  template <class T>
  static const T& expect(const Envelope<Payload>& e) {
    const auto* v = std::get_if<T>(&e.payload);
    if (!v) throw Error(ErrorCode::DesyncDetected, "unexpected message kind");
    return *v;
  }

  void begin_step_two(int k) {
    step_two_ = start_ + core_.n() + k - 1;
    log_.back().step_two = true;
    log_.back().originator = k;
    step_ = Step::Extend;
    wake_ = step_two_ + core_.label();
  }

  void next_stage(std::int64_t start) {
    if (core_.all_assigned()) {
      done_ = true;
      return;
    }
    if (r_ + 1 >= core_.stages()) throw Error(ErrorCode::Stall, "colors left after the last stage");
    ++r_;
    start_ = start;
    step_ = Step::Look;
    wake_ = start_ + core_.label();
  }

  AssignCore core_;
  std::span<const AgentIndex> agent_of_label_;
  Step step_ = Step::Look;
  int r_ = 0;
  std::int64_t start_ = 0;
  std::int64_t step_two_ = 0;
  std::int64_t wake_;
  std::vector<ColorIndex> cands_;
  bool done_ = false;
  std::vector<LeaderStageLog> log_;
  std::vector<AwardRecord> awards_;
};

class AsyncAssignAgent {
 public:
  using Payload = AssignPayload;

  AsyncAssignAgent(AssignCore core, std::span<const AgentIndex> agent_of_label)
      : core_(std::move(core)), agent_of_label_(agent_of_label) {
    if (core_.all_assigned()) done_ = true;
  }

  void on_start(EventContext<Payload>& ctx) {
    if (core_.leader() && !done_) begin_stage(ctx);
  }

  void on_message(EventContext<Payload>& ctx, const Envelope<Payload>& e) {
    const Shared& s = core_.shared();
    const int i = core_.label();
    const int n = core_.n();
    if (const auto* f = std::get_if<FlagMsg>(&e.payload)) {
      if (core_.leader()) {
        if (f->pass != 1) throw Error(ErrorCode::DesyncDetected, "flag returned twice");
        ctx.send(Direction::Clockwise, FlagMsg{f->any, 2}, 1, r_);
        decide(ctx, f->any);
      } else if (f->pass == 1) {
        log_.push_back(LeaderStageLog{r_, 0, false, -1, 0});
        cands_ = core_.candidates(r_);
        ctx.send(Direction::Clockwise, FlagMsg{f->any || !cands_.empty(), 1}, 1, r_);
      } else {
        if (i + 1 < n) ctx.send(Direction::Clockwise, *f, 1, r_);
        decide(ctx, f->any);
      }
      return;
    }
    if (const auto* fin = std::get_if<FinalMsg>(&e.payload)) {
      if (core_.leader()) throw Error(ErrorCode::DesyncDetected, "final list returned");
      if (i + 1 < n) ctx.send(Direction::Clockwise, *fin, final_bits(s, *fin), r_);
      finish_stage(ctx, *fin);
      return;
    }
    Carried list = read_carried(e.payload);
    if (core_.leader()) {
      FinalMsg final_list;
      if (s.rule == StageRule::Greedy) {
        final_list.colors = std::move(list.claims);
      } else {
        final_list = core_.resolve(list.bids, r_, awards_, agent_of_label_);
      }
      log_.back().assigned = static_cast<int>(final_list.colors.size());
      ctx.send(Direction::Clockwise, final_list, final_bits(s, final_list), r_);
      finish_stage(ctx, final_list);
      return;
    }
    extend(list);
    const auto bits = list_bits(s, list);
    ctx.send(Direction::Clockwise, carried_payload(s, std::move(list)), bits, r_);
  }

  bool halted() const { return done_; }
  const AssignCore& core() const { return core_; }
  const std::vector<LeaderStageLog>& log() const { return log_; }
  const std::vector<AwardRecord>& awards() const { return awards_; }

 private:
  void begin_stage(EventContext<Payload>& ctx) {
    log_.push_back(LeaderStageLog{r_, ctx.now(), false, -1, 0});
    cands_ = core_.candidates(r_);
    ctx.send(Direction::Clockwise, FlagMsg{!cands_.empty(), 1}, 1, r_);
  }

  void extend(Carried& list) {
    if (core_.shared().rule == StageRule::Greedy) {
      const std::size_t before = list.claims.size();
      core_.extend_claims(cands_, list.claims);
      core_.claim({list.claims.begin() + static_cast<std::ptrdiff_t>(before), list.claims.end()});
    } else {
      core_.extend_bids(cands_, list.bids);
    }
  }

  void decide(EventContext<Payload>& ctx, bool any) {
    if (any) {
      log_.back().step_two = true;
      if (core_.leader()) {
        Carried list;
        extend(list);
        const auto bits = list_bits(core_.shared(), list);
        ctx.send(Direction::Clockwise, carried_payload(core_.shared(), std::move(list)), bits, r_);
      }
      return;
    }
    advance(ctx);
  }

  void finish_stage(EventContext<Payload>& ctx, const FinalMsg& f) {
    core_.apply(f, r_);
    advance(ctx);
  }

  void advance(EventContext<Payload>& ctx) {
    if (core_.all_assigned()) {
      done_ = true;
      return;
    }
    if (r_ + 1 >= core_.stages()) throw Error(ErrorCode::Stall, "colors left after the last stage");
    ++r_;
    if (core_.leader()) begin_stage(ctx);
  }

  AssignCore core_;
  std::span<const AgentIndex> agent_of_label_;
  int r_ = 0;
  std::vector<ColorIndex> cands_;
  bool done_ = false;
  std::vector<LeaderStageLog> log_;
  std::vector<AwardRecord> awards_;
};

template <class Agent>
void check_agreement(const std::vector<Agent>& agents) {
  const auto& ref = agents.front().log();
  for (const auto& a : agents) {
    const auto& log = a.log();
    if (log.size() != ref.size()) throw Error(ErrorCode::DesyncDetected, "stage counts differ");
    for (std::size_t k = 0; k < log.size(); ++k) {
      if (log[k].r != ref[k].r || log[k].step_two != ref[k].step_two) {
        throw Error(ErrorCode::DesyncDetected, "agents disagree on stage " + std::to_string(k));
      }
    }
  }
}

template <class Agent>
AssignResult collect(const std::vector<Agent>& agents, std::span<const AgentIndex> agent_of_label,
                     std::span<const StageInterval> schedule, const MessageAccounting& acct,
                     bool sync) {
  const int n = static_cast<int>(agents.size());
  AssignResult out;
  const int m = agents.front().core().shared().m;
  out.assignment.pi.assign(static_cast<std::size_t>(m), -1);
  for (AgentIndex a = 0; a < n; ++a) {
    for (ColorIndex c : agents[a].core().owned()) {
      if (out.assignment.pi[c] != -1) throw Error(ErrorCode::DesyncDetected, "double owner");
      out.assignment.pi[c] = a;
    }
  }
  const auto& leader = agents[agent_of_label[0]];
  out.stage_of_color = leader.core().stage_of_color();
  out.awards = leader.awards();
  for (const auto& entry : leader.log()) {
    StageRecord rec;
    rec.r = entry.r;
    rec.interval = schedule[entry.r];
    rec.step_two = entry.step_two;
    rec.originator = sync ? entry.originator : -1;
    rec.colors_assigned = entry.assigned;
    rec.start_time = entry.start;
    auto it = acct.per_stage().find(entry.r);
    rec.units = it == acct.per_stage().end() ? 0 : it->second;
    out.stages.push_back(rec);
  }
  return out;
}

}  // namespace

AssignResult run_assignment(const Instance& inst, std::span<const int> labels,
                            std::span<const StageInterval> schedule, StageRule rule,
                            const ProtocolConfig& config, MessageAccounting& acct) {
  const int n = inst.agents();
  const int m = inst.colors();
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty stage schedule");
  std::vector<AgentIndex> agent_of_label(static_cast<std::size_t>(n), -1);
  for (AgentIndex a = 0; a < n; ++a) agent_of_label.at(labels[a]) = a;

  if (n == 1) {
    AssignResult out;
    out.assignment.pi.assign(static_cast<std::size_t>(m), 0);
    out.stage_of_color.assign(static_cast<std::size_t>(m), 0);
    for (ColorIndex j = 0; j < m; ++j) out.stage_of_color[j] = stage_of_weight(schedule, inst(j, 0));
    return out;
  }

  Shared shared;
  shared.n = n;
  shared.m = m;
  shared.schedule = schedule;
  shared.rule = rule;
  shared.policy = config.policy;
  shared.color_bits = bits::color(m);
  shared.label_bits = bits::label(n);
  // Weights stay below the estimate lo_0 * base that produced the schedule.
  const Count p_hat = ceil_to_count(Rational(schedule[0].lo) * schedule[0].base);
  shared.weight_bits = bits::weight(std::max<Count>(p_hat - 1, 1));

  // Phase-3 stages are tagged; nothing else in this accounting run is.
  MessageAccounting local(n);
  AssignResult out;
  auto build = [&](auto& agents) {
    agents.reserve(static_cast<std::size_t>(n));
    for (AgentIndex a = 0; a < n; ++a) {
      agents.emplace_back(AssignCore(shared, labels[a], inst.column(a)), agent_of_label);
    }
  };
  if (config.engine == EngineKind::Sync) {
    std::vector<SyncAssignAgent> agents;
    build(agents);
    const auto rounds =
        run_sync(std::span(agents), local, SyncOptions{kPhaseAssign, config.max_rounds, config.trace});
    check_agreement(agents);
    out = collect(agents, agent_of_label, schedule, local, true);
    out.time = rounds;
  } else {
    std::vector<AsyncAssignAgent> agents;
    build(agents);
    const auto res = run_async(std::span(agents), local, config.delay,
                               AsyncOptions{kPhaseAssign, config.max_events, config.trace, 3});
    check_agreement(agents);
    out = collect(agents, agent_of_label, schedule, local, false);
    out.time = res.elapsed;
  }
  acct.absorb(local);
  return out;
}

}  // namespace ringbalance
