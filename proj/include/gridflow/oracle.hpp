// Copyright 2026 The Gridflow Authors
//
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

// Explicit edge-list graphs and a shortest-augmenting-path reference solver.
// Only meant for cross-checking the structured solvers on small inputs.

#ifndef GRIDFLOW_ORACLE_HPP_
#define GRIDFLOW_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "gridflow/error.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

struct Arc {
  std::uint32_t tail = 0;
  std::uint32_t head = 0;
  FlowValue capacity = 0;
};

struct ExplicitGraph {
  std::uint32_t node_count = 0;
  std::uint32_t source = 0;
  std::uint32_t sink = 0;
  std::vector<Arc> arcs;
};

// Grid vertices keep their index; s = n and t = n + 1. Zero-capacity slots
// are omitted.
inline ExplicitGraph to_explicit_graph(const CapacityStore& store) {
  const std::uint64_t n = store.vertex_count();
  ExplicitGraph g;
  g.node_count = static_cast<std::uint32_t>(n + 2);
  g.source = static_cast<std::uint32_t>(n);
  g.sink = static_cast<std::uint32_t>(n + 1);
  const SlotLayout& layout = store.layout();
  for (std::uint64_t v = 0; v < n; ++v) {
    const auto vi = static_cast<std::uint32_t>(v);
    if (store.source_capacity(v) > 0) {
      g.arcs.push_back({g.source, vi, store.source_capacity(v)});
    }
    if (store.sink_capacity(v) > 0) {
      g.arcs.push_back({vi, g.sink, store.sink_capacity(v)});
    }
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      const Capacity c = store.capacity(v, e);
      if (c == 0) continue;
      const auto w = store.topology().target(v, e);
      if (!w) continue;
      g.arcs.push_back({vi, static_cast<std::uint32_t>(*w), c});
    }
  }
  return g;
}

struct OracleResult {
  FlowValue flow = 0;
  FlowValue cut_capacity = 0;
  std::vector<std::uint8_t> source_side;
};

// Edmonds-Karp: repeated breadth-first augmentation along shortest paths.
inline OracleResult oracle_maxflow(const ExplicitGraph& g) {
  if (g.source >= g.node_count || g.sink >= g.node_count) {
    throw Error(ErrorCode::kInvalidArgument, "terminal outside node range");
  }
  OracleResult result;
  result.source_side.assign(g.node_count, 0);
  if (g.source == g.sink) return result;

  struct Residual {
    std::uint32_t head;
    FlowValue cap;
  };
  std::vector<Residual> res;
  std::vector<std::vector<std::uint32_t>> adj(g.node_count);
  res.reserve(2 * g.arcs.size());
  for (const Arc& a : g.arcs) {
    if (a.tail >= g.node_count || a.head >= g.node_count) {
      throw Error(ErrorCode::kInvalidArgument, "arc endpoint out of range");
    }
    if (a.capacity < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative arc capacity");
    }
    adj[a.tail].push_back(static_cast<std::uint32_t>(res.size()));
    res.push_back({a.head, a.capacity});
    adj[a.head].push_back(static_cast<std::uint32_t>(res.size()));
    res.push_back({a.tail, 0});
  }

  std::vector<std::int64_t> via(g.node_count);
  std::vector<std::uint32_t> queue;
  auto bfs = [&]() {
    std::fill(via.begin(), via.end(), -1);
    queue.clear();
    queue.push_back(g.source);
    via[g.source] = -2;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t u = queue[head];
      for (std::uint32_t id : adj[u]) {
        const Residual& r = res[id];
        if (r.cap <= 0 || via[r.head] != -1) continue;
        via[r.head] = id;
        if (r.head == g.sink) return true;
        queue.push_back(r.head);
      }
    }
    return false;
  };

  while (bfs()) {
    FlowValue bottleneck = std::numeric_limits<FlowValue>::max();
    for (std::uint32_t x = g.sink; x != g.source;) {
      const auto id = static_cast<std::uint32_t>(via[x]);
      bottleneck = std::min(bottleneck, res[id].cap);
      x = res[id ^ 1u].head;
    }
    for (std::uint32_t x = g.sink; x != g.source;) {
      const auto id = static_cast<std::uint32_t>(via[x]);
      res[id].cap -= bottleneck;
      res[id ^ 1u].cap += bottleneck;
      x = res[id ^ 1u].head;
    }
    result.flow += bottleneck;
  }

  // The last search marked exactly the nodes reachable from s.
  for (std::uint32_t u = 0; u < g.node_count; ++u) {
    result.source_side[u] = via[u] != -1 ? 1 : 0;
  }
  for (const Arc& a : g.arcs) {
    if (result.source_side[a.tail] && !result.source_side[a.head]) {
      result.cut_capacity += a.capacity;
    }
  }
  return result;
}

}  // namespace gridflow

#endif  // GRIDFLOW_ORACLE_HPP_
