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

// Optimal net surfaces via minimum cut.
//
// A net picks one row h(p) in every column p. Its cost is
//   sum_p w(p, h(p)) + sum_{p, q adjacent} f(h(q) - h(p)),
// where q runs over the right and back neighbors of p and f is convex on
// [-K, K]. Nets with |h(q) - h(p)| > K are infeasible.
//
// The source side of a cut is read as the rows 0..h(p) of every column.
// Vertex weights become first differences along the column, and f is split
// into hinge terms max(0, d + delta) / max(0, delta - d) whose weights are
// the second differences of f; each hinge is one family of interval arcs.

#ifndef GRIDFLOW_SURFACE_HPP_
#define GRIDFLOW_SURFACE_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "gridflow/error.hpp"
#include "gridflow/flow_state.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

struct SurfaceWeights {
  SurfaceWeights() = default;
  explicit SurfaceWeights(const VolumeDims& d)
      : dims(d),
        vertex_weight(d.vertex_count(), 0),
        edge_cost(d.interval_width(), 0) {}

  VolumeDims dims;
  // Indexed by vertex index.
  std::vector<std::int32_t> vertex_weight;
  // f(delta) for delta = -K..K, stored at delta + K.
  std::vector<std::int32_t> edge_cost;

  std::int32_t& weight(std::uint32_t c, std::uint32_t s, std::uint32_t r) {
    return vertex_weight[vertex_index(c, s, r, dims).index()];
  }
  std::int32_t weight(std::uint32_t c, std::uint32_t s, std::uint32_t r) const {
    return vertex_weight[vertex_index(c, s, r, dims).index()];
  }
  std::int64_t cost(std::int32_t delta) const {
    return edge_cost[static_cast<std::size_t>(
        delta + static_cast<std::int32_t>(dims.edge_interval))];
  }
};

struct NetSurface {
  // Row per column, indexed c * S + s.
  std::vector<std::uint32_t> height;
};

// Throws NON_CONVEX_PRIOR when a second difference of the cost table is
// negative.
inline void check_convex(const SurfaceWeights& w) {
  const auto K = static_cast<std::int32_t>(w.dims.edge_interval);
  if (w.edge_cost.size() != w.dims.interval_width()) {
    throw Error(ErrorCode::kInvalidArgument, "cost table must have 2K+1 entries");
  }
  for (std::int32_t k = -K + 1; k <= K - 1; ++k) {
    if (w.cost(k + 1) - 2 * w.cost(k) + w.cost(k - 1) < 0) {
      throw Error(ErrorCode::kNonConvexPrior,
                  "second difference negative at offset " + std::to_string(k));
    }
  }
}

struct SurfaceGraph {
  CapacityStore store;
  // objective = cut capacity + offset.
  FlowValue offset = 0;
  FlowValue big_m = 0;
};

namespace detail {

// Neighbor pairs (p, q) with q to the right (column + 1) or back (slice + 1).
template <typename Fn>
void for_each_column_pair(const VolumeDims& d, Fn&& fn) {
  for (std::uint32_t c = 0; c < d.columns; ++c) {
    for (std::uint32_t s = 0; s < d.slices; ++s) {
      if (c + 1 < d.columns) fn(c, s, c + 1, s, Neighbor::kRight, Neighbor::kLeft);
      if (s + 1 < d.slices) fn(c, s, c, s + 1, Neighbor::kBack, Neighbor::kFront);
    }
  }
}

}  // namespace detail

// Builds the s-t instance. `scale` multiplies every weight and cost.
inline SurfaceGraph build_st_graph(const SurfaceWeights& weights,
                                   std::int64_t scale = 1) {
  const VolumeDims& d = weights.dims;
  validate_dims(d);
  if (weights.vertex_weight.size() != d.vertex_count()) {
    throw Error(ErrorCode::kInvalidArgument, "weight volume size mismatch");
  }
  if (scale < 1) throw Error(ErrorCode::kInvalidArgument, "scale must be >= 1");
  check_convex(weights);

  const auto K = static_cast<std::int32_t>(d.edge_interval);
  const std::int64_t R = d.rows;
  const SlotLayout layout(d.edge_interval);
  constexpr std::int64_t kInf = -1;  // marker inside the int64 tables

  // Interval arc weights: a[delta] on p -> (q, r + delta), b[delta] on
  // q -> (p, r + delta).
  std::vector<std::int64_t> a(layout.width(), 0);
  std::vector<std::int64_t> b(layout.width(), 0);
  auto at = [K](std::int32_t delta) { return static_cast<std::size_t>(delta + K); };
  std::int64_t pair_constant = 0;
  if (K == 0) {
    a[at(0)] = b[at(0)] = kInf;
    pair_constant = scale * weights.cost(0);
  } else {
    for (std::int32_t k = -K + 1; k <= K - 1; ++k) {
      b[at(-k)] += scale * (weights.cost(k + 1) - 2 * weights.cost(k) +
                            weights.cost(k - 1));
    }
    const std::int64_t slope = scale * (weights.cost(-K + 1) - weights.cost(-K));
    pair_constant = scale * weights.cost(-K);
    if (slope >= 0) {
      b[at(K)] += slope;
    } else {
      a[at(K)] += -slope;
      pair_constant -= 2 * std::int64_t{K} * -slope;
    }
    a[at(-K)] = b[at(-K)] = kInf;
  }

  // Transformed vertex weights; row 0 gets -M once M is known.
  const std::uint64_t n = d.vertex_count();
  std::vector<std::int64_t> tw(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    const std::int64_t w = scale * weights.vertex_weight[v];
    const bool bottom = v % R == 0;
    tw[v] = bottom ? w : w - scale * weights.vertex_weight[v - 1];
  }
  std::int64_t constant = 0;
  std::int64_t pair_count = 0;
  std::int64_t lateral_total = 0;
  // Interval arcs whose target row lies above the top act as sink arcs of
  // their origin; arcs whose origin lies below row 0 act as source arcs of
  // their target.
  auto fold_phantoms = [&](std::uint32_t pc, std::uint32_t ps, std::uint32_t qc,
                           std::uint32_t qs, const std::vector<std::int64_t>& arcs) {
    for (std::int32_t delta = -K; delta <= K; ++delta) {
      const std::int64_t cap = arcs[at(delta)];
      if (cap == 0 || cap == kInf) continue;
      for (std::int64_t r = 0; r < R; ++r) {
        const std::int64_t target = r + delta;
        if (target >= R) {
          tw[vertex_index(pc, ps, static_cast<std::uint32_t>(r), d).index()] += cap;
        } else if (target >= 0) {
          lateral_total += cap;
        }
      }
      for (std::int64_t target = 0; target < std::min<std::int64_t>(delta, R);
           ++target) {
        tw[vertex_index(qc, qs, static_cast<std::uint32_t>(target), d).index()] -= cap;
        constant += cap;
      }
      // Both ends phantom: origin below row 0, target above the top.
      if (delta > R) constant += cap * (delta - R);
    }
  };
  detail::for_each_column_pair(
      d, [&](std::uint32_t pc, std::uint32_t ps, std::uint32_t qc,
             std::uint32_t qs, Neighbor, Neighbor) {
        ++pair_count;
        fold_phantoms(pc, ps, qc, qs, a);
        fold_phantoms(qc, qs, pc, ps, b);
      });

  std::int64_t abs_total = 0;
  for (std::int64_t x : tw) abs_total += std::llabs(x);
  const std::int64_t big_m = 1 + 2 * (abs_total + lateral_total);
  const std::int64_t columns = std::int64_t{d.columns} * d.slices;
  for (std::uint64_t v = 0; v < n; v += static_cast<std::uint64_t>(R)) tw[v] -= big_m;
  constant += big_m * columns + pair_constant * pair_count;

  CapacityStore store(d);
  const Capacity cap_limit = kInfiniteCapacity - 1;
  auto checked = [&](std::int64_t x) {
    if (x < 0 || x > cap_limit) {
      throw Error(ErrorCode::kCapacityOverflow,
                  "capacity " + std::to_string(x) + " does not fit");
    }
    return static_cast<Capacity>(x);
  };
  std::int64_t negative_total = 0;
  std::int64_t source_total = 0;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (tw[v] < 0) {
      store.set_source_capacity(v, checked(-tw[v]));
      negative_total += -tw[v];
      source_total += -tw[v];
    } else {
      store.set_sink_capacity(v, checked(tw[v]));
    }
  }

  // Infinite slots are filled last so they can absorb whatever the mate
  // leaves of the 32-bit pair budget.
  std::vector<std::pair<std::uint64_t, EdgeSlot>> infinite;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (v % R != 0) infinite.push_back({v, SlotLayout::kDown});
  }
  auto place = [&](std::uint32_t pc, std::uint32_t ps, Neighbor nb,
                   const std::vector<std::int64_t>& arcs) {
    for (std::int32_t delta = -K; delta <= K; ++delta) {
      const std::int64_t cap = arcs[at(delta)];
      if (cap == 0) continue;
      const EdgeSlot slot = layout.lateral(nb, delta);
      for (std::int64_t r = 0; r < R; ++r) {
        if (r + delta < 0 || r + delta >= R) continue;
        const std::uint64_t v =
            vertex_index(pc, ps, static_cast<std::uint32_t>(r), d).index();
        if (cap == kInf) {
          infinite.push_back({v, slot});
        } else {
          store.set_edge_capacity(v, slot, checked(cap));
        }
      }
    }
  };
  detail::for_each_column_pair(
      d, [&](std::uint32_t pc, std::uint32_t ps, std::uint32_t qc,
             std::uint32_t qs, Neighbor forward, Neighbor backward) {
        place(pc, ps, forward, a);
        place(qc, qs, backward, b);
      });

  std::vector<std::uint8_t> is_infinite(n * layout.edges_per_node(), 0);
  for (const auto& [v, slot] : infinite) {
    is_infinite[v * layout.edges_per_node() + slot] = 1;
  }
  Capacity smallest_infinite = kInfiniteCapacity;
  const GraphTopology& topo = store.topology();
  for (const auto& [v, slot] : infinite) {
    const std::uint64_t w = *topo.target(v, slot);
    const EdgeSlot m = layout.mate_slot(slot);
    Capacity value = 0;
    if (is_infinite[w * layout.edges_per_node() + m]) {
      value = kInfiniteCapacity / 2;
    } else {
      value = kInfiniteCapacity - store.capacity(w, m);
    }
    store.set_edge_capacity(v, slot, value);
    smallest_infinite = std::min(smallest_infinite, value);
  }
  if (!infinite.empty() && source_total >= smallest_infinite) {
    throw Error(ErrorCode::kCapacityOverflow,
                "total source capacity reaches the infinite-arc value");
  }

  SurfaceGraph g{std::move(store), constant - negative_total, big_m};
  return g;
}

// Height of each column = highest source-side row.
inline NetSurface extract_surface(const CutResult& cut, const VolumeDims& dims) {
  NetSurface net;
  const std::uint64_t columns = std::uint64_t{dims.columns} * dims.slices;
  net.height.resize(columns);
  for (std::uint64_t col = 0; col < columns; ++col) {
    const std::uint64_t base = col * dims.rows;
    if (!cut.contains(base)) {
      throw Error(ErrorCode::kEmptyColumn,
                  "column " + std::to_string(col) + " has no source-side vertex");
    }
    std::uint32_t h = 0;
    for (std::uint32_t r = 0; r < dims.rows; ++r) {
      if (cut.contains(base + r)) h = r;
    }
    net.height[col] = h;
  }
  return net;
}

// Empty string when every column has a height in range and adjacent heights
// differ by at most K.
inline std::string check_surface(const NetSurface& net, const VolumeDims& d) {
  if (net.height.size() != std::uint64_t{d.columns} * d.slices) {
    return "surface has the wrong number of columns";
  }
  for (std::uint32_t h : net.height) {
    if (h >= d.rows) return "height outside the column";
  }
  std::string problem;
  detail::for_each_column_pair(
      d, [&](std::uint32_t pc, std::uint32_t ps, std::uint32_t qc,
             std::uint32_t qs, Neighbor, Neighbor) {
        const auto hp = static_cast<std::int64_t>(net.height[pc * d.slices + ps]);
        const auto hq = static_cast<std::int64_t>(net.height[qc * d.slices + qs]);
        if (std::llabs(hq - hp) > std::int64_t{d.edge_interval} && problem.empty()) {
          problem = "adjacent heights differ by more than the edge interval";
        }
      });
  return problem;
}

inline FlowValue surface_objective(const SurfaceWeights& w, const NetSurface& net) {
  const VolumeDims& d = w.dims;
  const std::string problem = check_surface(net, d);
  if (!problem.empty()) throw Error(ErrorCode::kInvalidArgument, problem);
  FlowValue total = 0;
  for (std::uint32_t c = 0; c < d.columns; ++c) {
    for (std::uint32_t s = 0; s < d.slices; ++s) {
      total += w.weight(c, s, net.height[c * d.slices + s]);
    }
  }
  detail::for_each_column_pair(
      d, [&](std::uint32_t pc, std::uint32_t ps, std::uint32_t qc,
             std::uint32_t qs, Neighbor, Neighbor) {
        const auto hp = static_cast<std::int32_t>(net.height[pc * d.slices + ps]);
        const auto hq = static_cast<std::int32_t>(net.height[qc * d.slices + qs]);
        total += w.cost(hq - hp);
      });
  return total;
}

// Exhaustive minimum over all feasible nets. Only for tiny volumes.
inline FlowValue brute_force_surface(const SurfaceWeights& w,
                                     NetSurface* best_net = nullptr) {
  const VolumeDims& d = w.dims;
  const std::uint64_t columns = std::uint64_t{d.columns} * d.slices;
  double combos = 1;
  for (std::uint64_t i = 0; i < columns; ++i) combos *= d.rows;
  if (combos > 5e7) {
    throw Error(ErrorCode::kInvalidArgument, "volume too large for enumeration");
  }
  NetSurface net;
  net.height.assign(columns, 0);
  FlowValue best = std::numeric_limits<FlowValue>::max();
  for (;;) {
    if (check_surface(net, d).empty()) {
      const FlowValue value = surface_objective(w, net);
      if (value < best) {
        best = value;
        if (best_net) *best_net = net;
      }
    }
    std::uint64_t i = 0;
    while (i < columns && ++net.height[i] == d.rows) net.height[i++] = 0;
    if (i == columns) break;
  }
  return best;
}

}  // namespace gridflow

#endif  // GRIDFLOW_SURFACE_HPP_
