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

#include "ringbalance/sim.hpp"

namespace ringbalance {

MessageAccounting::MessageAccounting(int n) : unit_bits_(bits::label(n)) {}

std::int64_t MessageAccounting::units_for(std::int64_t payload_bits) const noexcept {
  if (payload_bits <= 0) return 1;
  return std::max<std::int64_t>(1, (payload_bits + unit_bits_ - 1) / unit_bits_);
}

std::int64_t MessageAccounting::charge(std::int64_t payload_bits, const std::string& phase,
                                       int stage) {
  const std::int64_t units = units_for(payload_bits);
  total_ += units;
  ++messages_;
  per_phase_[phase] += units;
  if (stage >= 0) per_stage_[stage] += units;
  return units;
}

void MessageAccounting::absorb(const MessageAccounting& other) {
  total_ += other.total_;
  messages_ += other.messages_;
  for (const auto& [phase, units] : other.per_phase_) per_phase_[phase] += units;
  for (const auto& [stage, units] : other.per_stage_) per_stage_[stage] += units;
}

DelayModel DelayModel::uniform(std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
  if (lo < 1 || hi < lo) {
    throw Error(ErrorCode::InvalidConfig, "uniform delay needs 1 <= lo <= hi");
  }
  return DelayModel(Uniform{lo, hi, seed});
}

DelayModel DelayModel::per_link(PerLink table) {
  if (table.fallback < 1) throw Error(ErrorCode::InvalidConfig, "delays must be >= 1");
  for (const auto& [link, cycle] : table.delays) {
    if (cycle.empty()) throw Error(ErrorCode::InvalidConfig, "empty delay cycle");
    for (auto d : cycle) {
      if (d < 1) throw Error(ErrorCode::InvalidConfig, "delays must be >= 1");
    }
  }
  return DelayModel(std::move(table));
}

std::string DelayModel::describe() const {
  if (std::holds_alternative<Unit>(kind_)) return "unit";
  if (const auto* u = std::get_if<Uniform>(&kind_)) {
    return "uniform:" + std::to_string(u->lo) + "," + std::to_string(u->hi);
  }
  return "table";
}

DelayModel::Sampler::Sampler(const DelayModel& model, std::uint64_t salt) : model_(&model) {
  std::uint64_t seed = salt * 0x9E3779B97F4A7C15ULL;
  if (const auto* u = std::get_if<Uniform>(&model.kind_)) seed ^= u->seed;
  rng_.seed(seed);
}

std::int64_t DelayModel::Sampler::next(AgentIndex src, Direction dir) {
  if (const auto* u = std::get_if<Uniform>(&model_->kind_)) {
    std::uniform_int_distribution<std::int64_t> dist(u->lo, u->hi);
    return dist(rng_);
  }
  if (const auto* t = std::get_if<PerLink>(&model_->kind_)) {
    const auto key = std::make_pair(src, dir);
    auto it = t->delays.find(key);
    if (it == t->delays.end()) return t->fallback;
    auto& pos = cursor_[key];
    const std::int64_t d = it->second[pos % it->second.size()];
    ++pos;
    return d;
  }
  return 1;
}

}  // namespace ringbalance
