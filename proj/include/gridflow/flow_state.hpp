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

// Per-vertex push-relabel state, residual-graph searches, minimum cut
// extraction and flow validation shared by every structured solver.

#ifndef GRIDFLOW_FLOW_STATE_HPP_
#define GRIDFLOW_FLOW_STATE_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gridflow/structured_graph.hpp"

namespace gridflow {

#if defined(NDEBUG)
#define GRIDFLOW_DCHECK(cond) ((void)0)
#else
#define GRIDFLOW_DCHECK(cond)                                                \
  do {                                                                       \
    if (!(cond)) {                                                           \
      throw ::gridflow::Error(::gridflow::ErrorCode::kVerificationFailed,    \
                              std::string("check failed: ") + #cond + " at " \
                                  + __FILE__ + ":" + std::to_string(__LINE__)); \
    }                                                                        \
  } while (false)
#endif

using Label = std::int32_t;

// Labels follow the usual conventions: d(t) = 0, d(s) = n, and
// 2n + 1 marks a vertex with no residual way out.
struct FlowState {
  explicit FlowState(std::uint64_t vertex_count = 0)
      : n(vertex_count),
        excess(vertex_count, 0),
        label(vertex_count, 0),
        wave(vertex_count, 0),
        current_edge(vertex_count, 0),
        source_capacity(vertex_count, 0) {}

  Label source_label() const { return static_cast<Label>(n); }
  Label disconnected_label() const { return static_cast<Label>(2 * n + 1); }

  std::uint64_t n;
  std::vector<FlowValue> excess;
  std::vector<Label> label;
  std::vector<std::uint32_t> wave;
  std::vector<EdgeSlot> current_edge;
  // Original s -> v capacities; the residual v -> s equals
  // source_capacity[v] - residual(source slot).
  std::vector<Capacity> source_capacity;
  // Excess accumulated at the sink, i.e. the current flow value |f|.
  FlowValue flow_value = 0;
};

// Residual capacity of the arc v -> s.
inline Capacity reverse_source_residual(const CapacityStore& store,
                                        const FlowState& state,
                                        std::uint64_t v) {
  return state.source_capacity[v] - store.source_capacity(v);
}

enum class RelabelScope {
  // Vertices that cannot reach t get label n.
  kSinkOnly,
  // Vertices that cannot reach t get n + (residual distance to s), or the
  // disconnected sentinel.
  kSinkThenSource,
};

// Exact global relabeling by reverse breadth-first search over residual arcs.
// Resets every current-edge cursor.
inline void global_relabel(const CapacityStore& store, FlowState& state,
                           RelabelScope scope) {
  const GraphTopology& topo = store.topology();
  const SlotLayout& layout = store.layout();
  const std::uint64_t n = state.n;
  constexpr Label kUnset = -1;
  std::fill(state.label.begin(), state.label.end(), kUnset);
  std::fill(state.current_edge.begin(), state.current_edge.end(), 0);

  std::vector<VertexIndex> queue;
  queue.reserve(n);
  auto expand = [&](std::size_t head) {
    for (; head < queue.size(); ++head) {
      const std::uint64_t v = queue[head];
      const Label next = state.label[v] + 1;
      const OffsetEntry* row = topo.cache_row(v);
      for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
        if (!row[e].in_bounds()) continue;
        const std::int64_t w = static_cast<std::int64_t>(v) + row[e].delta;
        if (w < 0 || static_cast<std::uint64_t>(w) >= n) continue;
        if (state.label[w] != kUnset) continue;
        if (store.capacity(w, row[e].mate_slot) == 0) continue;
        state.label[w] = next;
        queue.push_back(static_cast<VertexIndex>(w));
      }
    }
  };

  for (std::uint64_t v = 0; v < n; ++v) {
    if (store.sink_capacity(v) > 0) {
      state.label[v] = 1;
      queue.push_back(static_cast<VertexIndex>(v));
    }
  }
  expand(0);

  if (scope == RelabelScope::kSinkThenSource) {
    const std::size_t start = queue.size();
    for (std::uint64_t v = 0; v < n; ++v) {
      if (state.label[v] == kUnset &&
          reverse_source_residual(store, state, v) > 0) {
        state.label[v] = state.source_label() + 1;
        queue.push_back(static_cast<VertexIndex>(v));
      }
    }
    expand(start);
  }

  const Label fallback = scope == RelabelScope::kSinkOnly
                             ? state.source_label()
                             : state.disconnected_label();
  for (auto& d : state.label) {
    if (d == kUnset) d = fallback;
  }
}

// Residual breadth-first distance from every grid vertex to t (-1 when t is
// unreachable). Independent of FlowState; used for checking labels.
inline std::vector<std::int64_t> sink_distances(const CapacityStore& store) {
  const GraphTopology& topo = store.topology();
  const std::uint64_t n = store.vertex_count();
  std::vector<std::int64_t> dist(n, -1);
  std::vector<std::uint64_t> queue;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (store.sink_capacity(v) > 0) {
      dist[v] = 1;
      queue.push_back(v);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t v = queue[head];
    for (EdgeSlot e = 0; e < store.layout().grid_slots(); ++e) {
      const auto w = topo.target(v, e);
      if (!w || dist[*w] >= 0) continue;
      if (store.capacity(*w, store.layout().mate_slot(e)) == 0) continue;
      dist[*w] = dist[v] + 1;
      queue.push_back(*w);
    }
  }
  return dist;
}

struct CutResult {
  // source_side[v] != 0 iff grid vertex v lies with s.
  std::vector<std::uint8_t> source_side;
  FlowValue cut_capacity = 0;

  bool contains(std::uint64_t v) const { return source_side[v] != 0; }
};

// Minimum cut from a maximum-flow residual: S is everything reachable from s.
// Capacities of the cut are read from the original (pre-solve) instance.
inline CutResult min_cut(const CapacityStore& original,
                         const CapacityStore& residual) {
  const GraphTopology& topo = residual.topology();
  const SlotLayout& layout = residual.layout();
  const std::uint64_t n = residual.vertex_count();
  CutResult cut;
  cut.source_side.assign(n, 0);
  std::vector<std::uint64_t> queue;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (residual.source_capacity(v) > 0) {
      cut.source_side[v] = 1;
      queue.push_back(v);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t v = queue[head];
    if (residual.sink_capacity(v) > 0) {
      throw Error(ErrorCode::kFlowNotMaximal,
                  "sink reachable from source through vertex " +
                      std::to_string(v));
    }
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      if (residual.capacity(v, e) == 0) continue;
      const auto w = topo.target(v, e);
      if (!w || cut.source_side[*w]) continue;
      cut.source_side[*w] = 1;
      queue.push_back(*w);
    }
  }
  FlowValue total = 0;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (!cut.source_side[v]) {
      total += original.source_capacity(v);
      continue;
    }
    total += original.sink_capacity(v);
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      const auto w = topo.target(v, e);
      if (w && !cut.source_side[*w]) total += original.capacity(v, e);
    }
  }
  cut.cut_capacity = total;
  return cut;
}

struct FlowCheck {
  bool ok = true;
  FlowValue value = 0;
  std::string failure;
};

// Recovers f(v, w) = c(v, w) - r(v, w) from the two stores and checks
// capacity bounds, antisymmetry bookkeeping and conservation at every grid
// vertex.
inline FlowCheck check_flow(const CapacityStore& original,
                            const CapacityStore& residual) {
  FlowCheck check;
  const GraphTopology& topo = residual.topology();
  const SlotLayout& layout = residual.layout();
  const std::uint64_t n = residual.vertex_count();
  auto fail = [&](const std::string& msg) {
    if (check.ok) check.failure = msg;
    check.ok = false;
  };
  FlowValue into_sink = 0;
  FlowValue out_of_source = 0;
  for (std::uint64_t v = 0; v < n && check.ok; ++v) {
    const FlowValue from_source = FlowValue{original.source_capacity(v)} -
                                  residual.source_capacity(v);
    const FlowValue to_sink =
        FlowValue{original.sink_capacity(v)} - residual.sink_capacity(v);
    if (from_source < 0 || to_sink < 0) {
      fail("terminal arc above capacity at vertex " + std::to_string(v));
      break;
    }
    out_of_source += from_source;
    into_sink += to_sink;
    FlowValue net_out = to_sink;
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      const auto w = topo.target(v, e);
      if (!w) {
        if (residual.capacity(v, e) != 0) {
          fail("capacity on a missing edge at vertex " + std::to_string(v));
        }
        continue;
      }
      const EdgeSlot m = layout.mate_slot(e);
      const FlowValue pair_before =
          FlowValue{original.capacity(v, e)} + original.capacity(*w, m);
      const FlowValue pair_after =
          FlowValue{residual.capacity(v, e)} + residual.capacity(*w, m);
      if (pair_before != pair_after) {
        fail("mate pair sum changed at vertex " + std::to_string(v) +
             " slot " + std::to_string(e));
        break;
      }
      const FlowValue f = FlowValue{original.capacity(v, e)} -
                          residual.capacity(v, e);
      // -c(w, v) <= f(v, w) <= c(v, w)
      if (f > original.capacity(v, e) || -f > original.capacity(*w, m)) {
        fail("capacity bound violated at vertex " + std::to_string(v));
        break;
      }
      net_out += f;
    }
    if (check.ok && net_out != from_source) {
      fail("conservation violated at vertex " + std::to_string(v) +
           ": in " + std::to_string(from_source) + ", out " +
           std::to_string(net_out));
    }
  }
  if (check.ok && into_sink != out_of_source) {
    fail("source outflow differs from sink inflow");
  }
  check.value = into_sink;
  return check;
}

}  // namespace gridflow

#endif  // GRIDFLOW_FLOW_STATE_HPP_
