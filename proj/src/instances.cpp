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

#include "ringbalance/instances.hpp"

#include <algorithm>
#include <random>

namespace ringbalance {

Instance gen_random(int n, int m, Count p_max, double density, std::uint64_t seed) {
  if (n < 1 || m < n) throw Error(ErrorCode::BadParams, "need 1 <= n <= m");
  if (p_max < 0) throw Error(ErrorCode::BadParams, "p_max must be >= 0");
  if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorCode::BadParams, "density outside [0,1]");
  std::mt19937_64 rng(seed);
  std::vector<Count> q(static_cast<std::size_t>(n) * m, 0);
  if (p_max > 0) {
    std::bernoulli_distribution present(density);
    std::uniform_int_distribution<Count> value(1, p_max);
    for (auto& x : q) {
      if (present(rng)) x = value(rng);
    }
  }
  return Instance(n, m, std::move(q));
}

std::vector<int> family_c_prime(const FamilySpec& spec, int pair) {
  if (spec.c_prime.empty()) throw Error(ErrorCode::BadSpec, "C' missing");
  std::vector<int> c = spec.c_prime.size() == 1 ? spec.c_prime[0] : spec.c_prime.at(pair);
  std::sort(c.begin(), c.end());
  return c;
}

namespace {

void check_family(const FamilySpec& s) {
  if (s.n < 2 || s.n % 2 != 0) throw Error(ErrorCode::BadSpec, "n must be even and >= 2");
  if (s.t < 2 || s.t % 2 != 0) throw Error(ErrorCode::BadSpec, "t must be even and >= 2");
  if (s.u <= 1) throw Error(ErrorCode::BadSpec, "u must exceed 1");
  const int pairs = s.n / 2;
  if (s.c_prime.size() != 1 && s.c_prime.size() != static_cast<std::size_t>(pairs)) {
    throw Error(ErrorCode::BadSpec, "need one C' or one per pair");
  }
  for (int b = 0; b < pairs; ++b) {
    const auto c = family_c_prime(s, b);
    if (c.size() != static_cast<std::size_t>(s.t / 2)) {
      throw Error(ErrorCode::BadSpec, "C' must hold t/2 colors");
    }
    if (std::adjacent_find(c.begin(), c.end()) != c.end() || c.front() < 0 || c.back() >= s.t) {
      throw Error(ErrorCode::BadSpec, "C' offsets must be distinct and in [0, t)");
    }
  }
}

Instance gen_family(const FamilySpec& s, Count c2_delta) {
  check_family(s);
  const int pairs = s.n / 2;
  const int m = pairs * s.t;
  std::vector<Count> q(static_cast<std::size_t>(s.n) * m, 0);
  for (int b = 0; b < pairs; ++b) {
    const auto cp = family_c_prime(s, b);
    for (int off = 0; off < s.t; ++off) {
      const ColorIndex j = b * s.t + off;
      const bool in_prime = std::binary_search(cp.begin(), cp.end(), off);
      q[static_cast<std::size_t>(j) * s.n + b] = s.u;
      q[static_cast<std::size_t>(j) * s.n + b + pairs] = in_prime ? s.u : s.u + c2_delta;
    }
  }
  return Instance(s.n, m, std::move(q));
}

Count family_cost(const Instance& inst, const FamilySpec& s, bool partner) {
  const int pairs = s.n / 2;
  Count total = 0;
  for (int b = 0; b < pairs; ++b) {
    for (int off = 0; off < s.t; ++off) total += inst(b * s.t + off, partner ? b + pairs : b);
  }
  return total;
}

bool integral(const Rational& x) { return denominator(x) == 1; }

}  // namespace

Instance gen_family_I1(const FamilySpec& spec) { return gen_family(spec, +1); }
Instance gen_family_I2(const FamilySpec& spec) { return gen_family(spec, -1); }

Count family_I1_cost(const Instance& inst, const FamilySpec& spec) {
  return family_cost(inst, spec, false);
}
Count family_I2_cost(const Instance& inst, const FamilySpec& spec) {
  return family_cost(inst, spec, true);
}

Instance gen_tight(const TightSpec& s) {
  if (s.n < 2 || s.n % 2 != 0) throw Error(ErrorCode::BadParams, "n must be even and >= 2");
  if (s.q < 1) throw Error(ErrorCode::BadParams, "q must be positive");
  if (s.delta <= 0 || s.epsilon <= 0) throw Error(ErrorCode::BadParams, "delta, eps must be > 0");
  const Rational q(s.q);
  const Rational own = q * (s.delta + s.epsilon / 4);
  const Rational other = q * (2 * s.delta - s.epsilon / 4);
  const Rational quarter = q * s.epsilon / 4;
  for (const Rational* x : {&own, &other, &quarter}) {
    if (!integral(*x)) {
      throw Error(ErrorCode::NonIntegralWeights, "weight " + to_string(*x) + " is not integral");
    }
  }
  if (other < 0) throw Error(ErrorCode::BadParams, "2 delta - eps/4 must be >= 0");
  const Count w_own = static_cast<Count>(numerator(own));
  const Count w_other = static_cast<Count>(numerator(other));

  if (s.require_same_interval) {
    const Count p = std::max({w_own, w_other, s.q});
    const auto schedule = stage_intervals(power_of_two_estimate(p), Rational(2));
    const Rational qd = q * s.delta;
    const Count qd_lo = static_cast<Count>(numerator(qd) / denominator(qd));
    const int r = stage_of_weight(schedule, w_own);
    const bool same = stage_of_weight(schedule, s.q) == r && stage_of_weight(schedule, w_other) == r &&
                      integral(qd) && stage_of_weight(schedule, qd_lo) == r;
    if (!same) {
      throw Error(ErrorCode::IntervalConditionUnsatisfiable,
                  "q*delta, q(delta+eps/4), q, q(2delta-eps/4) span several stages");
    }
  }
  std::vector<Count> qm(static_cast<std::size_t>(s.n) * s.n, 0);
  auto at = [&](ColorIndex j, AgentIndex i) -> Count& {
    return qm[static_cast<std::size_t>(j) * s.n + i];
  };
  for (int i = 0; i < s.n; i += 2) {
    at(i, i) = w_own;
    at(i + 1, i) = s.q;
    at(i, i + 1) = w_other;
    at(i + 1, i + 1) = 0;
  }
  return Instance(s.n, s.n, std::move(qm));
}

Rational tight_optimal_cost(const TightSpec& s) {
  return Rational(s.n / 2) * Rational(s.q) * (s.delta + s.epsilon / 4);
}

Rational tight_ratio_formula(const Rational& delta, const Rational& epsilon) {
  return 3 - 4 * epsilon / (4 * delta + epsilon);
}

}  // namespace ringbalance
