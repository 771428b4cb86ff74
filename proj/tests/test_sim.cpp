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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ringbalance/sim.hpp"

using namespace ringbalance;

namespace {

struct Token {};

// Sends one empty token clockwise every round and never halts.
struct Chatter {
  using Payload = Token;
  void on_round(RoundContext<Token>& ctx) { ctx.send(Direction::Clockwise, Token{}, 0); }
  bool halted() const { return false; }
};

struct Mute {
  using Payload = Token;
  void on_round(RoundContext<Token>&) {}
  bool halted() const { return true; }
};

// Agent 0 sends `count` numbered messages to agent 1; agent 1 logs them.
struct Sender {
  using Payload = int;
  int count = 0;
  std::vector<int> got;
  std::vector<std::int64_t> at;
  void on_start(EventContext<int>& ctx) {
    if (ctx.self() != 0) return;
    for (int k = 0; k < count; ++k) ctx.send(Direction::Clockwise, k, 1);
  }
  void on_message(EventContext<int>& ctx, const Envelope<int>& e) {
    got.push_back(e.payload);
    at.push_back(ctx.now());
  }
  bool halted() const { return true; }
};

// Agent 0 relays a token around the ring `laps` times.
struct Relay {
  using Payload = int;
  int laps = 1;
  void on_start(EventContext<int>& ctx) {
    if (ctx.self() == 0) ctx.send(Direction::Clockwise, 0, 1);
  }
  void on_message(EventContext<int>& ctx, const Envelope<int>& e) {
    int lap = e.payload + (ctx.self() == 0 ? 1 : 0);
    if (lap < laps) ctx.send(Direction::Clockwise, lap, 1);
  }
  bool halted() const { return true; }
};

}  // namespace

TEST_CASE("charge") {
  MessageAccounting a16(16);
  CHECK(a16.basic_unit_bits() == 4);
  CHECK(a16.units_for(3) == 1);
  CHECK(a16.units_for(9) == 3);
  CHECK(a16.units_for(0) == 1);
  // k color ids of ceil(log2 m) bits.
  MessageAccounting a8(8);
  CHECK(a8.units_for(5 * 4) == 7);
  MessageAccounting a1(1);
  CHECK(a1.basic_unit_bits() == 1);

  MessageAccounting acct(4);
  acct.charge(5, "x", 0);
  acct.charge(1, "y");
  CHECK(acct.total_units() == 4);
  CHECK(acct.messages() == 2);
  CHECK(acct.per_phase().at("x") == 3);
  CHECK(acct.per_stage().at(0) == 3);
  MessageAccounting more(4);
  more.charge(2, "x", 0);
  acct.absorb(more);
  CHECK(acct.total_units() == 5);
  CHECK(acct.per_phase().at("x") == 4);
  CHECK(acct.per_stage().at(0) == 4);
}

TEST_CASE("sync token ring hits the round limit") {
  std::vector<Chatter> agents(3);
  MessageAccounting acct(3);
  SyncOptions opts;
  opts.max_rounds = 5;
  try {
    run_sync(std::span<Chatter>(agents), acct, opts);
    FAIL("expected RoundLimitExceeded");
  } catch (const SimLimitError& e) {
    CHECK(e.code() == ErrorCode::RoundLimitExceeded);
    CHECK(e.elapsed() == 5);
  }
  CHECK(acct.total_units() == 15);
}

TEST_CASE("silent agents terminate at once") {
  std::vector<Mute> agents(4);
  MessageAccounting acct(4);
  CHECK(run_sync(std::span<Mute>(agents), acct) == 0);
  CHECK(acct.total_units() == 0);
}

TEST_CASE("async unit delay") {
  std::vector<Sender> agents(2);
  agents[0].count = 1;
  MessageAccounting acct(2);
  const auto out = run_async(std::span<Sender>(agents), acct, DelayModel::unit());
  REQUIRE(agents[1].got.size() == 1);
  CHECK(agents[1].at[0] == 1);
  CHECK(out.elapsed == 1);
}

TEST_CASE("async links are FIFO under random delays") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<Sender> agents(3);
    agents[0].count = 12;
    MessageAccounting acct(3);
    run_async(std::span<Sender>(agents), acct, DelayModel::uniform(1, 9, seed));
    REQUIRE(agents[1].got.size() == 12);
    for (int k = 0; k < 12; ++k) CHECK(agents[1].got[k] == k);
    CHECK(std::is_sorted(agents[1].at.begin(), agents[1].at.end()));
  }
}

TEST_CASE("async runs are deterministic") {
  auto trace_of = [](std::uint64_t seed) {
    std::vector<Relay> agents(5);
    for (auto& a : agents) a.laps = 3;
    MessageAccounting acct(5);
    AsyncOptions opts;
    std::vector<std::int64_t> times;
    opts.trace = [&](const TraceRecord& r) { times.push_back(r.t * 16 + r.dst); };
    run_async(std::span<Relay>(agents), acct, DelayModel::uniform(1, 4, seed), opts);
    CHECK(acct.messages() == 15);
    return times;
  };
  CHECK(trace_of(7) == trace_of(7));
  CHECK(trace_of(7) != trace_of(8));
}

TEST_CASE("per-link delay table") {
  DelayModel::PerLink table;
  table.fallback = 2;
  table.delays[{0, Direction::Clockwise}] = {5, 1};
  std::vector<Sender> agents(2);
  agents[0].count = 2;
  MessageAccounting acct(2);
  run_async(std::span<Sender>(agents), acct, DelayModel::per_link(table));
  REQUIRE(agents[1].at.size() == 2);
  // The second message would arrive at 1 but may not overtake the first.
  CHECK(agents[1].at[0] == 5);
  CHECK(agents[1].at[1] == 5);
}

TEST_CASE("sends to non-neighbors are rejected") {
  std::vector<Envelope<int>> out;
  RoundContext<int> ctx(0, 5, 0, {}, &out);
  CHECK_THROWS_AS(ctx.send_to(2, 1, 1), Error);
  ctx.send_to(4, 1, 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].dir == Direction::CounterClockwise);
}
