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

#include "ringbalance/oracle.hpp"

#include <atomic>
#include <functional>
#include <limits>
#include <queue>

#include <boost/multiprecision/cpp_int.hpp>

namespace ringbalance {
namespace {

std::atomic<Count> g_cost_skew{0};

constexpr Count kInf = std::numeric_limits<Count>::max() / 4;

// Successive shortest paths with Dijkstra on reduced costs. All arc costs
// are non-negative, so zero potentials are valid initially.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int add_arc(int from, int to, Count cap, Count cost) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap, cost});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0, -cost});
    return static_cast<int>(arcs_.size()) - 2;
  }

  // Returns (flow, cost).
  std::pair<Count, Count> run(int s, int t, Count want) {
    const std::size_t nv = adj_.size();
    std::vector<Count> pot(nv, 0), dist(nv);
    std::vector<int> via(nv);
    Count flow = 0, total = 0;
    using Item = std::pair<Count, int>;
    while (flow < want) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), -1);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[s] = 0;
      pq.push({0, s});
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (int id : adj_[v]) {
          const Arc& a = arcs_[id];
          if (a.cap <= 0) continue;
          const Count nd = d + a.cost + pot[v] - pot[a.to];
          if (nd < dist[a.to]) {
            dist[a.to] = nd;
            via[a.to] = id;
            pq.push({nd, a.to});
          }
        }
      }
      if (dist[t] >= kInf) break;
      for (std::size_t v = 0; v < nv; ++v) {
        if (dist[v] < kInf) pot[v] += dist[v];
      }
      Count push = want - flow;
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].cap);
      for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= push;
        arcs_[via[v] ^ 1].cap += push;
        total += push * arcs_[via[v]].cost;
      }
      flow += push;
    }
    return {flow, total};
  }

  Count residual(int arc) const { return arcs_[arc].cap; }

 private:
  struct Arc {
    int to;
    Count cap;
    Count cost;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  Assignment assignment;
  Count kept = 0;
};

// `capacity` empty: Definition-1 balance via floor slots plus the pool.
// Otherwise agent i takes exactly capacity[i] colors.
FlowResult solve_flow(const Instance& inst, std::span<const int> capacity = {}) {
  const int n = inst.agents();
  const int m = inst.colors();
  const int floor_q = m / n;
  const int extra = m - n * floor_q;
  const Count top = inst.max_weight();
  const int src = 0;
  const int color0 = 1;
  const int agent0 = 1 + m;
  const int pool = 1 + m + n;
  const int sink = pool + 1;
  MinCostFlow g(sink + 1);
  std::vector<std::vector<int>> arc(static_cast<std::size_t>(m));
  for (ColorIndex j = 0; j < m; ++j) {
    g.add_arc(src, color0 + j, 1, 0);
    for (AgentIndex i = 0; i < n; ++i) {
      arc[j].push_back(g.add_arc(color0 + j, agent0 + i, 1, top - inst(j, i)));
    }
  }
  for (AgentIndex i = 0; i < n; ++i) {
    if (capacity.empty()) {
      g.add_arc(agent0 + i, sink, floor_q, 0);
      g.add_arc(agent0 + i, pool, 1, 0);
    } else {
      g.add_arc(agent0 + i, sink, capacity[i], 0);
    }
  }
  if (capacity.empty()) g.add_arc(pool, sink, extra, 0);
  const auto [flow, total] = g.run(src, sink, m);
  if (flow != m) throw Error(ErrorCode::InvalidArgument, "flow network infeasible");
  FlowResult out;
  out.assignment.pi.assign(static_cast<std::size_t>(m), -1);
  for (ColorIndex j = 0; j < m; ++j) {
    for (AgentIndex i = 0; i < n; ++i) {
      if (g.residual(arc[j][i]) == 0) out.assignment.pi[j] = i;
    }
  }
  out.kept = top * m - total;
  return out;
}

}  // namespace

Solution optimal_assignment(const Instance& inst) {
  FlowResult f = solve_flow(inst);
  Solution s;
  s.cost = cost(f.assignment, inst) + g_cost_skew.load();
  s.assignment = std::move(f.assignment);
  return s;
}

Count max_kept_weight(const Instance& inst) { return solve_flow(inst).kept; }

Solution quota_optimal(const Instance& inst, std::span<const int> capacity) {
  if (capacity.size() != static_cast<std::size_t>(inst.agents())) {
    throw Error(ErrorCode::ShapeMismatch, "one capacity per agent expected");
  }
  Count sum = 0;
  for (int c : capacity) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative capacity");
    sum += c;
  }
  if (sum != inst.colors()) throw Error(ErrorCode::InvalidArgument, "capacities must sum to m");
  FlowResult f = solve_flow(inst, capacity);
  Solution s;
  s.cost = cost(f.assignment, inst);
  s.assignment = std::move(f.assignment);
  return s;
}

std::int64_t balanced_assignment_count(int n, int m) {
  using boost::multiprecision::cpp_int;
  const int f = m / n;
  const int r = m - n * f;
  auto fact = [](int k) {
    cpp_int x = 1;
    for (int i = 2; i <= k; ++i) x *= i;
    return x;
  };
  cpp_int choose = fact(n) / (fact(r) * fact(n - r));
  cpp_int denom = 1;
  for (int i = 0; i < n - r; ++i) denom *= fact(f);
  for (int i = 0; i < r; ++i) denom *= fact(f + 1);
  const cpp_int total = choose * fact(m) / denom;
  if (total > std::numeric_limits<std::int64_t>::max()) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return total.convert_to<std::int64_t>();
}

Solution exhaustive_optimal(const Instance& inst, std::int64_t guard) {
  const int n = inst.agents();
  const int m = inst.colors();
  const std::int64_t count = balanced_assignment_count(n, m);
  if (count > guard) {
    throw Error(ErrorCode::TooLarge,
                std::to_string(count) + " balanced assignments exceed " + std::to_string(guard));
  }
  const int f = m / n;
  const int r = m - n * f;
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  std::vector<AgentIndex> pi(static_cast<std::size_t>(m), -1);
  int high = 0;  // agents at f + 1
  Count best_kept = -1;
  std::vector<AgentIndex> best;

  std::function<void(ColorIndex, Count)> dfs = [&](ColorIndex j, Count kept) {
    if (j == m) {
      if (kept > best_kept) {
        best_kept = kept;
        best = pi;
      }
      return;
    }
    int deficit = 0;
    for (int d : deg) deficit += std::max(0, f - d);
    if (deficit > m - j) return;
    for (AgentIndex i = 0; i < n; ++i) {
      const int cap = deg[i] < f ? f : (high < r || deg[i] > f ? f + 1 : f);
      if (deg[i] >= cap) continue;
      const bool rises = deg[i] == f;
      if (rises) ++high;
      ++deg[i];
      pi[j] = i;
      dfs(j + 1, kept + inst(j, i));
      --deg[i];
      if (rises) --high;
    }
  };
  dfs(0, 0);
  Solution s;
  s.assignment.pi = std::move(best);
  s.cost = inst.total_items() - best_kept;
  return s;
}

Solution hungarian_optimal(const Instance& inst) {
  const int n = inst.agents();
  if (inst.colors() != n) throw Error(ErrorCode::InvalidArgument, "needs m == n");
  const Count top = inst.max_weight();
  // Rows are colors, columns agents, 1-based with a dummy column 0.
  std::vector<Count> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    p[0] = row;
    int col0 = 0;
    std::vector<Count> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int row0 = p[col0];
      Count delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const Count c = top - inst(row0 - 1, col - 1);
        const Count cur = c - u[row0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[p[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (p[col0] != 0);
    do {
      const int col1 = way[col0];
      p[col0] = p[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  Solution s;
  s.assignment.pi.assign(static_cast<std::size_t>(n), -1);
  for (int col = 1; col <= n; ++col) s.assignment.pi[p[col] - 1] = col - 1;
  s.cost = cost(s.assignment, inst);
  return s;
}

PairStructure pair_structure(const Instance& inst) {
  const int n = inst.agents();
  const int m = inst.colors();
  auto reject = [](const std::string& why) { return Error(ErrorCode::NotFamilyInstance, why); };
  if (n % 2 != 0) throw reject("odd number of agents");
  const int pairs = n / 2;
  if (m % pairs != 0 || (m / pairs) % 2 != 0) throw reject("colors do not split into even blocks");
  PairStructure ps{pairs, m / pairs};
  for (int b = 0; b < pairs; ++b) {
    const AgentIndex first = b;
    const AgentIndex second = b + pairs;
    Count held_first = 0, held_second = 0;
    for (ColorIndex j = b * ps.block; j < (b + 1) * ps.block; ++j) {
      for (AgentIndex i = 0; i < n; ++i) {
        if (i != first && i != second && inst(j, i) != 0) {
          throw reject("color " + std::to_string(j) + " held outside its pair");
        }
      }
      held_first += inst(j, first);
      held_second += inst(j, second);
    }
    if (held_first == 0 || held_second == 0) throw reject("pair member without items");
  }
  return ps;
}

bool verify_pair_lemma(const Instance& inst) {
  const PairStructure ps = pair_structure(inst);
  const Solution s = optimal_assignment(inst);
  for (ColorIndex j = 0; j < inst.colors(); ++j) {
    const int b = j / ps.block;
    if (s.assignment.pi[j] != b && s.assignment.pi[j] != b + ps.pairs) return false;
  }
  return true;
}

namespace testing {
void set_oracle_cost_skew(Count delta) { g_cost_skew.store(delta); }
}  // namespace testing

}  // namespace ringbalance
