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

#include "ringbalance/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ringbalance {

void validate_instance(int n, int m, std::span<const Count> counts) {
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "need at least one agent");
  if (m < n) {
    throw Error(ErrorCode::FewerColorsThanAgents,
                "m=" + std::to_string(m) + " < n=" + std::to_string(n));
  }
  if (counts.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m)) {
    throw Error(ErrorCode::ShapeMismatch, "expected m*n counts");
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0) {
      throw Error(ErrorCode::NegativeCount,
                  "color " + std::to_string(k / n) + ", agent " + std::to_string(k % n));
    }
  }
}

Instance::Instance(int n, int m, std::vector<Count> counts)
    : n_(n), m_(m), counts_(std::move(counts)) {
  validate_instance(n_, m_, counts_);
}

Instance Instance::from_rows(int n, const std::vector<std::vector<Count>>& rows) {
  std::vector<Count> flat;
  flat.reserve(rows.size() * static_cast<std::size_t>(std::max(n, 0)));
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::ShapeMismatch, "every row needs n entries");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Instance(n, static_cast<int>(rows.size()), std::move(flat));
}

std::vector<Count> Instance::column(AgentIndex i) const {
  std::vector<Count> out(static_cast<std::size_t>(m_));
  for (ColorIndex j = 0; j < m_; ++j) out[j] = (*this)(j, i);
  return out;
}

Count Instance::agent_max(AgentIndex i) const {
  Count best = 0;
  for (ColorIndex j = 0; j < m_; ++j) best = std::max(best, (*this)(j, i));
  return best;
}

Count Instance::max_weight() const {
  return counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
}

Count Instance::total_items() const {
  return std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

std::vector<int> Assignment::degrees(int n) const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (AgentIndex a : pi) {
    if (a >= 0 && a < n) ++deg[a];
  }
  return deg;
}

int quota_pivot(int n, int m) { return (m / n + 1) * n - m; }

int quota(AgentIndex i, int n, int m) {
  return i < quota_pivot(n, m) ? m / n : m / n + 1;
}

std::vector<int> quotas(int n, int m) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = quota(i, n, m);
  return out;
}

bool is_balanced(const Assignment& a, const Instance& inst) {
  const int n = inst.agents();
  const int m = inst.colors();
  if (a.pi.size() != static_cast<std::size_t>(m)) return false;
  if (std::any_of(a.pi.begin(), a.pi.end(), [n](AgentIndex x) { return x < 0 || x >= n; })) {
    return false;
  }
  const int low = m / n;
  int at_low = 0;
  int at_high = 0;
  for (int d : a.degrees(n)) {
    if (d == low) {
      ++at_low;
    } else if (d == low + 1) {
      ++at_high;
    } else {
      return false;
    }
  }
  return at_low == quota_pivot(n, m) && at_high == m - low * n;
}

Count cost(const Assignment& a, const Instance& inst) {
  Count total = 0;
  for (ColorIndex j = 0; j < inst.colors(); ++j) {
    for (AgentIndex i = 0; i < inst.agents(); ++i) {
      if (i != a.pi[j]) total += inst(j, i);
    }
  }
  return total;
}

Count kept_weight(const Assignment& a, const Instance& inst) {
  Count kept = 0;
  for (ColorIndex j = 0; j < inst.colors(); ++j) kept += inst(j, a.pi[j]);
  return kept;
}

std::vector<StageInterval> stage_intervals(Count p_hat, const Rational& base) {
  if (base <= 1) throw Error(ErrorCode::InvalidBase, "base must exceed 1, got " + to_string(base));
  if (Rational(p_hat) < base) {
    throw Error(ErrorCode::InvalidArgument,
                "p_hat=" + std::to_string(p_hat) + " below base " + to_string(base));
  }
  const Rational cutoff = 1 / base;
  // t[r] = {p_hat / base^r}; stop after the first zero.
  std::vector<Count> t;
  Rational x(p_hat);
  while (true) {
    const Count tr = x > cutoff ? ceil_to_count(x) : 0;
    t.push_back(tr);
    if (tr == 0) break;
    x /= base;
  }
  std::vector<StageInterval> out;
  for (std::size_t r = 0; r + 1 < t.size(); ++r) {
    StageInterval iv;
    iv.lo = t[r + 1];
    if (r > 0) {
      iv.hi = t[r];
      if (iv.lo >= *iv.hi) continue;
    }
    iv.r = static_cast<int>(out.size());
    iv.base = base;
    out.push_back(iv);
  }
  return out;
}

int stage_of_weight(std::span<const StageInterval> schedule, Count w) {
  for (const auto& iv : schedule) {
    if (iv.contains(w)) return iv.r;
  }
  throw Error(ErrorCode::InvalidArgument, "weight outside schedule: " + std::to_string(w));
}

Count power_of_two_estimate(Count p) {
  const int ell = floor_log2(static_cast<std::uint64_t>(std::max<Count>(p, 1)));
  return Count{1} << (ell + 1);
}

double Ratio::to_double() const {
  if (infinite) return std::numeric_limits<double>::infinity();
  return ringbalance::to_double(value);
}

std::string Ratio::str() const { return infinite ? "inf" : to_string(value); }

Ratio approximation_ratio(Count cost_alg, Count cost_opt) {
  if (cost_opt < 0 || cost_alg < 0) {
    throw Error(ErrorCode::InvalidArgument, "costs must be non-negative");
  }
  if (cost_opt == 0) {
    if (cost_alg == 0) return Ratio{Rational(1), false};
    return Ratio{Rational(0), true};
  }
  return Ratio{Rational(cost_alg, cost_opt), false};
}

}  // namespace ringbalance
