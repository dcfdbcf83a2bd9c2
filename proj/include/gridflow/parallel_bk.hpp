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

// Tiled BK: the volume is cut into a grid of tiles over (columns, slices),
// each tile is solved independently, then neighboring groups of tiles are
// merged pairwise (columns first, then slices, alternating) and solving
// resumes on the merged groups with the search trees kept from the previous
// round. Only vertices next to an old seam whose tree tag differs from a
// neighbor across the seam are reactivated.

#ifndef GRIDFLOW_PARALLEL_BK_HPP_
#define GRIDFLOW_PARALLEL_BK_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "gridflow/bk.hpp"
#include "gridflow/error.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

struct ParallelBkOptions {
  std::uint32_t tile_columns = 1;
  std::uint32_t tile_slices = 1;
  // 0 = one thread per group.
  std::uint32_t max_threads = 0;
  // Snapshot residuals on every slot that crosses a group boundary and
  // verify they are untouched after each round.
  bool check_isolation = false;
};

struct ParallelBkRound {
  std::uint32_t groups_columns = 0;
  std::uint32_t groups_slices = 0;
  std::uint64_t reactivated = 0;
  // Flow found in this round, per group.
  std::vector<FlowValue> group_flow;

  FlowValue flow() const {
    FlowValue f = 0;
    for (FlowValue g : group_flow) f += g;
    return f;
  }
};

// Splits [0, total) into `parts` contiguous ranges, remainder to the front.
inline std::vector<std::uint32_t> split_range(std::uint32_t total,
                                              std::uint32_t parts) {
  std::vector<std::uint32_t> first(parts + 1);
  const std::uint32_t base = total / parts;
  const std::uint32_t extra = total % parts;
  std::uint32_t at = 0;
  for (std::uint32_t i = 0; i < parts; ++i) {
    first[i] = at;
    at += base + (i < extra ? 1 : 0);
  }
  first[parts] = at;
  return first;
}

class ParallelBk {
 public:
  ParallelBk(CapacityStore& store, ParallelBkOptions options = {})
      : store_(store),
        dims_(store.dims()),
        options_(options),
        trees_(store.vertex_count()),
        region_(store.vertex_count(), 0) {
    if (options_.tile_columns == 0 || options_.tile_slices == 0) {
      throw Error(ErrorCode::kInvalidArgument, "tile counts must be >= 1");
    }
    if (options_.tile_columns > dims_.columns ||
        options_.tile_slices > dims_.slices) {
      throw Error(ErrorCode::kTooManySegments,
                  "tiling " + std::to_string(options_.tile_columns) + "x" +
                      std::to_string(options_.tile_slices) +
                      " exceeds the column/slice grid");
    }
  }

  const std::vector<ParallelBkRound>& rounds() const { return rounds_; }
  const SearchTreeState& trees() const { return trees_; }

  FlowValue solve() {
    // Group g along an axis covers tiles [tile_first[g], tile_first[g + 1]).
    std::vector<std::uint32_t> col_tiles(options_.tile_columns + 1);
    std::vector<std::uint32_t> slice_tiles(options_.tile_slices + 1);
    for (std::uint32_t i = 0; i <= options_.tile_columns; ++i) col_tiles[i] = i;
    for (std::uint32_t i = 0; i <= options_.tile_slices; ++i) slice_tiles[i] = i;
    col_bounds_ = split_range(dims_.columns, options_.tile_columns);
    slice_bounds_ = split_range(dims_.slices, options_.tile_slices);

    assign_regions(col_tiles, slice_tiles);
    std::vector<std::vector<VertexIndex>> seeds = initial_seeds(col_tiles, slice_tiles);
    FlowValue total = run_round(col_tiles, slice_tiles, seeds, 0);

    bool columns_next = true;
    while (col_tiles.size() > 2 || slice_tiles.size() > 2) {
      const bool merge_columns =
          slice_tiles.size() <= 2 || (columns_next && col_tiles.size() > 2);
      columns_next = !merge_columns;
      std::vector<std::uint32_t> old_region = region_;
      if (merge_columns) {
        col_tiles = merge_axis(col_tiles);
      } else {
        slice_tiles = merge_axis(slice_tiles);
      }
      assign_regions(col_tiles, slice_tiles);
      std::uint64_t reactivated = 0;
      seeds = seam_seeds(old_region, col_tiles, slice_tiles, reactivated);
      total += run_round(col_tiles, slice_tiles, seeds, reactivated);
    }
    return total;
  }

 private:
  // Pairs neighbors; with an odd count the last group joins its left
  // neighbor's pair.
  static std::vector<std::uint32_t> merge_axis(
      const std::vector<std::uint32_t>& bounds) {
    const std::size_t groups = bounds.size() - 1;
    std::vector<std::uint32_t> merged;
    for (std::size_t g = 0; g + 1 < groups; g += 2) merged.push_back(bounds[g]);
    if (merged.empty()) merged.push_back(bounds[0]);
    merged.push_back(bounds.back());
    return merged;
  }

  // Column/slice ranges of a group, in grid units.
  std::pair<std::uint32_t, std::uint32_t> column_span(
      const std::vector<std::uint32_t>& ct, std::uint32_t g) const {
    return {col_bounds_[ct[g]], col_bounds_[ct[g + 1]]};
  }
  std::pair<std::uint32_t, std::uint32_t> slice_span(
      const std::vector<std::uint32_t>& st, std::uint32_t g) const {
    return {slice_bounds_[st[g]], slice_bounds_[st[g + 1]]};
  }

  template <typename Fn>
  void for_each_vertex(std::uint32_t c0, std::uint32_t c1, std::uint32_t s0,
                       std::uint32_t s1, Fn&& fn) const {
    const std::uint64_t R = dims_.rows;
    const std::uint64_t S = dims_.slices;
    for (std::uint64_t c = c0; c < c1; ++c) {
      for (std::uint64_t s = s0; s < s1; ++s) {
        const std::uint64_t base = (c * S + s) * R;
        for (std::uint64_t r = 0; r < R; ++r) fn(base + r);
      }
    }
  }

  void assign_regions(const std::vector<std::uint32_t>& ct,
                      const std::vector<std::uint32_t>& st) {
    const auto gc = static_cast<std::uint32_t>(ct.size() - 1);
    const auto gs = static_cast<std::uint32_t>(st.size() - 1);
    for (std::uint32_t i = 0; i < gc; ++i) {
      const auto [c0, c1] = column_span(ct, i);
      for (std::uint32_t j = 0; j < gs; ++j) {
        const auto [s0, s1] = slice_span(st, j);
        const std::uint32_t id = i * gs + j;
        for_each_vertex(c0, c1, s0, s1,
                        [&](std::uint64_t v) { region_[v] = id; });
      }
    }
  }

  std::vector<std::vector<VertexIndex>> initial_seeds(
      const std::vector<std::uint32_t>& ct,
      const std::vector<std::uint32_t>& st) const {
    const auto gc = static_cast<std::uint32_t>(ct.size() - 1);
    const auto gs = static_cast<std::uint32_t>(st.size() - 1);
    std::vector<std::vector<VertexIndex>> seeds(std::size_t{gc} * gs);
    for (std::uint32_t i = 0; i < gc; ++i) {
      const auto [c0, c1] = column_span(ct, i);
      for (std::uint32_t j = 0; j < gs; ++j) {
        const auto [s0, s1] = slice_span(st, j);
        auto& out = seeds[std::size_t{i} * gs + j];
        for_each_vertex(c0, c1, s0, s1, [&](std::uint64_t v) {
          out.push_back(static_cast<VertexIndex>(v));
        });
      }
    }
    return seeds;
  }

  // Vertices that now share a group with a neighbor they did not share one
  // with before, and whose tree differs from that neighbor's.
  std::vector<std::vector<VertexIndex>> seam_seeds(
      const std::vector<std::uint32_t>& old_region,
      const std::vector<std::uint32_t>& ct, const std::vector<std::uint32_t>& st,
      std::uint64_t& reactivated) const {
    const auto groups = (ct.size() - 1) * (st.size() - 1);
    std::vector<std::vector<VertexIndex>> seeds(groups);
    const GraphTopology& topo = store_.topology();
    const SlotLayout& layout = store_.layout();
    const std::uint64_t n = store_.vertex_count();
    reactivated = 0;
    for (std::uint64_t v = 0; v < n; ++v) {
      if (trees_.tag[v] == TreeTag::kFree) continue;
      for (EdgeSlot e = SlotLayout::kFirstLateral; e < layout.grid_slots(); ++e) {
        const auto w = topo.target(v, e);
        if (!w) continue;
        if (old_region[*w] == old_region[v] || region_[*w] != region_[v]) continue;
        if (trees_.tag[*w] == trees_.tag[v]) continue;
        seeds[region_[v]].push_back(static_cast<VertexIndex>(v));
        ++reactivated;
        break;
      }
    }
    return seeds;
  }

  struct Snapshot {
    std::uint64_t index;
    Capacity value;
  };

  std::vector<Snapshot> take_snapshot() const {
    std::vector<Snapshot> snap;
    const GraphTopology& topo = store_.topology();
    const SlotLayout& layout = store_.layout();
    const std::uint32_t epn = layout.edges_per_node();
    for (std::uint64_t v = 0; v < store_.vertex_count(); ++v) {
      for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
        const auto w = topo.target(v, e);
        if (w && region_[*w] != region_[v]) {
          snap.push_back({v * epn + e, store_.residuals()[v * epn + e]});
        }
      }
    }
    return snap;
  }

  FlowValue run_round(const std::vector<std::uint32_t>& ct,
                      const std::vector<std::uint32_t>& st,
                      const std::vector<std::vector<VertexIndex>>& seeds,
                      std::uint64_t reactivated) {
    const bool first = rounds_.empty();
    const auto groups = static_cast<std::uint32_t>(seeds.size());
    ParallelBkRound round;
    round.groups_columns = static_cast<std::uint32_t>(ct.size() - 1);
    round.groups_slices = static_cast<std::uint32_t>(st.size() - 1);
    round.reactivated = reactivated;
    round.group_flow.assign(groups, 0);

    std::vector<Snapshot> snap;
    if (options_.check_isolation && groups > 1) snap = take_snapshot();

    std::atomic<std::uint32_t> next{0};
    std::vector<std::exception_ptr> errors(groups);
    auto work = [&] {
      for (;;) {
        const std::uint32_t g = next.fetch_add(1);
        if (g >= groups) return;
        try {
          BkRegionSolver solver(store_, trees_, region_, g);
          for (VertexIndex v : seeds[g]) {
            if (first) {
              solver.seed(v);
            } else {
              solver.activate(v);
            }
          }
          round.group_flow[g] = solver.run();
        } catch (...) {
          errors[g] = std::current_exception();
        }
      }
    };
    std::uint32_t threads = groups;
    if (options_.max_threads > 0) threads = std::min(threads, options_.max_threads);
    if (threads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::uint32_t i = 0; i < threads; ++i) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const Snapshot& s : snap) {
      if (store_.residuals()[s.index] != s.value) {
        throw Error(ErrorCode::kVerificationFailed,
                    "residual across a group boundary changed during a round");
      }
    }
    const FlowValue f = round.flow();
    rounds_.push_back(std::move(round));
    return f;
  }

  CapacityStore& store_;
  VolumeDims dims_;
  ParallelBkOptions options_;
  SearchTreeState trees_;
  std::vector<std::uint32_t> region_;
  std::vector<std::uint32_t> col_bounds_;
  std::vector<std::uint32_t> slice_bounds_;
  std::vector<ParallelBkRound> rounds_;
};

inline FlowValue parallel_bk_maxflow(CapacityStore& store,
                                     ParallelBkOptions options = {}) {
  ParallelBk solver(store, options);
  return solver.solve();
}

}  // namespace gridflow

#endif  // GRIDFLOW_PARALLEL_BK_HPP_
