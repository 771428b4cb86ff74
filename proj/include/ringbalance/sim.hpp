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

// Deterministic ring simulator. Two engines share one message and cost
// model:
//
//  * run_sync: lock-step rounds. A message sent in round t is in the
//    receiver's inbox in round t+1. Agents are stepped in index order.
//  * run_async: event queue ordered by (delivery time, send sequence).
//    Per-link FIFO holds under every delay model.
//
// A message of b payload bits costs max(1, ceil(b / ceil(log2 n))) basic
// units. Every message sent in one engine run is charged to the phase label
// of that run.

#ifndef RINGBALANCE_SIM_HPP_
#define RINGBALANCE_SIM_HPP_

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ringbalance/common.hpp"

namespace ringbalance {

enum class Direction : std::uint8_t { Clockwise, CounterClockwise };

constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::Clockwise ? Direction::CounterClockwise : Direction::Clockwise;
}

constexpr AgentIndex neighbor(AgentIndex i, Direction d, int n) noexcept {
  return d == Direction::Clockwise ? (i + 1) % n : (i + n - 1) % n;
}

template <class Payload>
struct Envelope {
  AgentIndex src = 0;
  AgentIndex dst = 0;
  Direction dir = Direction::Clockwise;  // direction of travel
  Payload payload{};
  std::int64_t bits = 1;
  int stage = -1;
  std::int64_t sent_at = 0;
  std::int64_t units = 1;
};

/// One line of the optional event trace.
struct TraceRecord {
  std::int64_t t = 0;
  AgentIndex src = 0;
  AgentIndex dst = 0;
  std::string phase;
  std::int64_t units = 0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// Running count of basic-message units.
class MessageAccounting {
 public:
  explicit MessageAccounting(int n);

  int basic_unit_bits() const noexcept { return unit_bits_; }

  /// Units for a payload of `payload_bits` bits, without recording it.
  std::int64_t units_for(std::int64_t payload_bits) const noexcept;

  /// Records one message and returns its units.
  std::int64_t charge(std::int64_t payload_bits, const std::string& phase, int stage = -1);

  /// Adds every count of `other`.
  void absorb(const MessageAccounting& other);

  std::int64_t total_units() const noexcept { return total_; }
  std::int64_t messages() const noexcept { return messages_; }
  const std::map<std::string, std::int64_t>& per_phase() const noexcept { return per_phase_; }
  /// Units of messages tagged with a stage index.
  const std::map<int, std::int64_t>& per_stage() const noexcept { return per_stage_; }

 private:
  int unit_bits_;
  std::int64_t total_ = 0;
  std::int64_t messages_ = 0;
  std::map<std::string, std::int64_t> per_phase_;
  std::map<int, std::int64_t> per_stage_;
};

/// Link delay model for the asynchronous engine. Delays are whole time units
/// and at least 1.
class DelayModel {
 public:
  struct Unit {};
  struct Uniform {
    std::int64_t lo = 1;
    std::int64_t hi = 1;
    std::uint64_t seed = 0;
  };
  /// Per directed link (sender, direction of travel): a cycle of delays
  /// consumed one per message. Links without an entry use `fallback`.
  struct PerLink {
    std::map<std::pair<AgentIndex, Direction>, std::vector<std::int64_t>> delays;
    std::int64_t fallback = 1;
  };

  static DelayModel unit() { return DelayModel(Unit{}); }
  static DelayModel uniform(std::int64_t lo, std::int64_t hi, std::uint64_t seed);
  static DelayModel per_link(PerLink table);

  /// Fresh sampler state (RNG, per-link cursors) for one engine run.
  class Sampler {
   public:
    std::int64_t next(AgentIndex src, Direction dir);

   private:
    friend class DelayModel;
    explicit Sampler(const DelayModel& model, std::uint64_t salt);
    const DelayModel* model_;
    std::mt19937_64 rng_;
    std::map<std::pair<AgentIndex, Direction>, std::size_t> cursor_;
  };

  /// `salt` decorrelates samplers of consecutive runs sharing one model.
  Sampler sampler(std::uint64_t salt = 0) const { return Sampler(*this, salt); }

  bool is_unit() const noexcept { return std::holds_alternative<Unit>(kind_); }
  std::string describe() const;

 private:
  using Kind = std::variant<Unit, Uniform, PerLink>;
  explicit DelayModel(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Raised when a run hits its round or event budget; `elapsed` is the number
/// of rounds (or events) executed before stopping.
class SimLimitError : public Error {
 public:
  SimLimitError(ErrorCode code, std::int64_t elapsed, const std::string& what)
      : Error(code, what), elapsed_(elapsed) {}
  std::int64_t elapsed() const noexcept { return elapsed_; }

 private:
  std::int64_t elapsed_;
};

namespace detail {

template <class Payload>
class Mailer {
 public:
  Mailer(AgentIndex self, int n, std::int64_t now, std::vector<Envelope<Payload>>* out)
      : self_(self), n_(n), now_(now), out_(out) {}

  AgentIndex self() const noexcept { return self_; }
  int ring_size() const noexcept { return n_; }

  void send(Direction dir, Payload payload, std::int64_t bits, int stage = -1) {
    if (n_ < 2) throw Error(ErrorCode::NonNeighborSend, "single-agent ring has no links");
    Envelope<Payload> e;
    e.src = self_;
    e.dst = neighbor(self_, dir, n_);
    e.dir = dir;
    e.payload = std::move(payload);
    e.bits = bits;
    e.stage = stage;
    e.sent_at = now_;
    out_->push_back(std::move(e));
  }

  /// Sends to an explicit destination, which must be a ring neighbor. On a
  /// two-agent ring the clockwise link is used.
  void send_to(AgentIndex dst, Payload payload, std::int64_t bits, int stage = -1) {
    if (n_ >= 2 && dst == neighbor(self_, Direction::Clockwise, n_)) {
      send(Direction::Clockwise, std::move(payload), bits, stage);
    } else if (n_ >= 2 && dst == neighbor(self_, Direction::CounterClockwise, n_)) {
      send(Direction::CounterClockwise, std::move(payload), bits, stage);
    } else {
      throw Error(ErrorCode::NonNeighborSend,
                  "agent " + std::to_string(self_) + " -> " + std::to_string(dst));
    }
  }

 protected:
  AgentIndex self_;
  int n_;
  std::int64_t now_;
  std::vector<Envelope<Payload>>* out_;
};

}  // namespace detail

/// What an agent sees during one synchronous round.
template <class Payload>
class RoundContext : public detail::Mailer<Payload> {
 public:
  RoundContext(AgentIndex self, int n, std::int64_t round,
               std::span<const Envelope<Payload>> inbox,
               std::vector<Envelope<Payload>>* out)
      : detail::Mailer<Payload>(self, n, round, out), inbox_(inbox) {}

  std::int64_t round() const noexcept { return this->now_; }
  std::int64_t now() const noexcept { return this->now_; }
  std::span<const Envelope<Payload>> inbox() const noexcept { return inbox_; }

 private:
  std::span<const Envelope<Payload>> inbox_;
};

/// What an agent sees while handling one asynchronous event.
template <class Payload>
class EventContext : public detail::Mailer<Payload> {
 public:
  using detail::Mailer<Payload>::Mailer;
  std::int64_t now() const noexcept { return this->now_; }
};

template <class A>
concept SyncAgent = requires(A a, const A ca, RoundContext<typename A::Payload>& ctx) {
  a.on_round(ctx);
  { ca.halted() } -> std::convertible_to<bool>;
};

template <class A>
concept AsyncAgent = requires(A a, const A ca, EventContext<typename A::Payload>& ctx,
                              const Envelope<typename A::Payload>& e) {
  a.on_start(ctx);
  a.on_message(ctx, e);
  { ca.halted() } -> std::convertible_to<bool>;
};

struct SyncOptions {
  std::string phase = "run";
  std::int64_t max_rounds = 50'000'000;
  TraceSink trace;
};

struct AsyncOptions {
  std::string phase = "run";
  std::int64_t max_events = 50'000'000;
  TraceSink trace;
  std::uint64_t delay_salt = 0;
};

struct AsyncOutcome {
  std::int64_t elapsed = 0;  // latest delivery time
  std::int64_t events = 0;
};

/// Runs lock-step rounds until every agent has halted and no message is in
/// flight. Returns the number of rounds executed. Throws SimLimitError with
/// RoundLimitExceeded when `max_rounds` rounds did not suffice.
template <SyncAgent A>
std::int64_t run_sync(std::span<A> agents, MessageAccounting& acct, const SyncOptions& opts = {}) {
  using Payload = typename A::Payload;
  const int n = static_cast<int>(agents.size());
  std::vector<std::vector<Envelope<Payload>>> inbox(static_cast<std::size_t>(n));
  std::vector<Envelope<Payload>> sent;
  std::int64_t round = 0;
  auto quiescent = [&] {
    if (!std::all_of(agents.begin(), agents.end(), [](const A& a) { return a.halted(); })) {
      return false;
    }
    return std::all_of(inbox.begin(), inbox.end(), [](const auto& box) { return box.empty(); });
  };
  while (!quiescent()) {
    if (round >= opts.max_rounds) {
      throw SimLimitError(ErrorCode::RoundLimitExceeded, round,
                          opts.phase + ": no quiescence after " + std::to_string(round) + " rounds");
    }
    sent.clear();
    for (AgentIndex i = 0; i < n; ++i) {
      if (opts.trace) {
        for (const auto& e : inbox[i]) opts.trace({round, e.src, e.dst, opts.phase, e.units});
      }
      RoundContext<Payload> ctx(i, n, round, inbox[i], &sent);
      agents[i].on_round(ctx);
    }
    for (auto& box : inbox) box.clear();
    for (auto& e : sent) {
      e.units = acct.charge(e.bits, opts.phase, e.stage);
      inbox[e.dst].push_back(std::move(e));
    }
    ++round;
  }
  return round;
}

/// Runs the event loop until no message is in flight. Every agent's
/// on_start is invoked at time 0 in index order.
template <AsyncAgent A>
AsyncOutcome run_async(std::span<A> agents, MessageAccounting& acct, const DelayModel& delay,
                       const AsyncOptions& opts = {}) {
  using Payload = typename A::Payload;
  const int n = static_cast<int>(agents.size());
  struct Pending {
    std::int64_t at;
    std::uint64_t seq;
    Envelope<Payload> env;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, Later> queue;
  std::map<std::pair<AgentIndex, Direction>, std::int64_t> link_clear;
  auto sampler = delay.sampler(opts.delay_salt);
  std::uint64_t seq = 0;
  std::vector<Envelope<Payload>> sent;
  AsyncOutcome out;

  auto post = [&](std::int64_t now) {
    for (auto& e : sent) {
      e.units = acct.charge(e.bits, opts.phase, e.stage);
      const auto link = std::make_pair(e.src, e.dir);
      std::int64_t at = now + std::max<std::int64_t>(1, sampler.next(e.src, e.dir));
      auto& clear = link_clear[link];
      at = std::max(at, clear);  // FIFO: never overtake an earlier message
      clear = at;
      queue.push(Pending{at, seq++, std::move(e)});
    }
    sent.clear();
  };

  for (AgentIndex i = 0; i < n; ++i) {
    EventContext<Payload> ctx(i, n, 0, &sent);
    agents[i].on_start(ctx);
    post(0);
  }
  while (!queue.empty()) {
    if (out.events >= opts.max_events) {
      throw SimLimitError(ErrorCode::EventLimitExceeded, out.events,
                          opts.phase + ": event budget exhausted");
    }
    Pending next = queue.top();
    queue.pop();
    ++out.events;
    out.elapsed = std::max(out.elapsed, next.at);
    if (opts.trace) {
      opts.trace({next.at, next.env.src, next.env.dst, opts.phase, next.env.units});
    }
    EventContext<Payload> ctx(next.env.dst, n, next.at, &sent);
    agents[next.env.dst].on_message(ctx, next.env);
    post(next.at);
  }
  return out;
}

/// Adapts a message-driven agent (on_start / on_message) to the round
/// engine: on_start runs in round 0, then each inbox message is handled in
/// arrival order.
template <class Core>
class RoundDriven {
 public:
  using Payload = typename Core::Payload;

  template <class... Args>
  explicit RoundDriven(Args&&... args) : core_(std::forward<Args>(args)...) {}

  void on_round(RoundContext<Payload>& ctx) {
    if (ctx.round() == 0) core_.on_start(ctx);
    for (const auto& e : ctx.inbox()) core_.on_message(ctx, e);
  }
  bool halted() const { return core_.halted(); }

  Core& core() noexcept { return core_; }
  const Core& core() const noexcept { return core_; }

 private:
  Core core_;
};

}  // namespace ringbalance

#endif  // RINGBALANCE_SIM_HPP_
