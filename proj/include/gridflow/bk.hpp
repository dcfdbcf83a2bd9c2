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

// Two-tree augmenting path maxflow (growth / augmentation / adoption) on the
// structured layout. A solver instance is confined to one region: a set of
// vertices sharing the same id in a caller-supplied region map. Search trees
// live outside the solver so that regions can later be merged and the trees
// reused. No distance or timestamp heuristics are used when adopting.

#ifndef GRIDFLOW_BK_HPP_
#define GRIDFLOW_BK_HPP_

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "gridflow/structured_graph.hpp"

namespace gridflow {

enum class TreeTag : std::uint8_t { kFree = 0, kSource = 1, kSink = 2 };

struct SearchTreeState {
  static constexpr std::int32_t kTerminalParent = -1;
  static constexpr std::int32_t kOrphan = -2;
  static constexpr std::int32_t kNoParent = -3;

  explicit SearchTreeState(std::uint64_t n)
      : tag(n, TreeTag::kFree), parent(n, kNoParent), active(n, 0) {}

  std::vector<TreeTag> tag;
  // Slot of the vertex's own block that leads to its parent, or one of the
  // sentinels above.
  std::vector<std::int32_t> parent;
  std::vector<std::uint8_t> active;
};

class BkRegionSolver {
 public:
  BkRegionSolver(CapacityStore& store, SearchTreeState& trees,
                 std::span<const std::uint32_t> region_of, std::uint32_t region)
      : store_(store),
        topo_(store.topology()),
        layout_(store.layout()),
        trees_(trees),
        region_of_(region_of),
        region_(region) {}

  // Sends flow straight through vertices holding both terminal arcs, then
  // roots each remaining terminal-connected vertex in the matching tree.
  void seed(std::uint64_t v) {
    Capacity& src = store_.capacity(v, layout_.source_slot());
    Capacity& snk = store_.capacity(v, layout_.sink_slot());
    const Capacity direct = std::min(src, snk);
    src -= direct;
    snk -= direct;
    flow_ += direct;
    if (src > 0) {
      trees_.tag[v] = TreeTag::kSource;
      trees_.parent[v] = SearchTreeState::kTerminalParent;
      activate(v);
    } else if (snk > 0) {
      trees_.tag[v] = TreeTag::kSink;
      trees_.parent[v] = SearchTreeState::kTerminalParent;
      activate(v);
    } else {
      trees_.tag[v] = TreeTag::kFree;
      trees_.parent[v] = SearchTreeState::kNoParent;
    }
  }

  void activate(std::uint64_t v) {
    if (trees_.active[v]) return;
    trees_.active[v] = 1;
    active_.push_back(static_cast<VertexIndex>(v));
  }

  std::size_t active_count() const { return active_.size(); }
  FlowValue flow() const { return flow_; }
  std::uint64_t augmentations() const { return augmentations_; }

  // Runs until no active vertex remains; returns the flow found by this
  // solver (including direct terminal flow from seed()).
  FlowValue run() {
    while (!active_.empty()) {
      const std::uint64_t p = active_.front();
      if (trees_.tag[p] == TreeTag::kFree || !grow(p)) {
        active_.pop_front();
        trees_.active[p] = 0;
        continue;
      }
      adopt_orphans();
    }
    return flow_;
  }

 private:
  bool in_region(std::uint64_t w) const { return region_of_[w] == region_; }

  std::optional<std::uint64_t> neighbor(std::uint64_t v, EdgeSlot e) const {
    return topo_.target(v, e);
  }

  // Expands p by one step; returns true after an augmentation.
  bool grow(std::uint64_t p) {
    const TreeTag tp = trees_.tag[p];
    for (EdgeSlot e = 0; e < layout_.grid_slots(); ++e) {
      const auto q = neighbor(p, e);
      if (!q || !in_region(*q)) continue;
      const EdgeSlot m = layout_.mate_slot(e);
      if (tp == TreeTag::kSource) {
        if (store_.capacity(p, e) == 0) continue;
        const TreeTag tq = trees_.tag[*q];
        if (tq == TreeTag::kFree) {
          trees_.tag[*q] = TreeTag::kSource;
          trees_.parent[*q] = static_cast<std::int32_t>(m);
          activate(*q);
        } else if (tq == TreeTag::kSink) {
          augment(p, e);
          return true;
        }
      } else {
        if (store_.capacity(*q, m) == 0) continue;
        const TreeTag tq = trees_.tag[*q];
        if (tq == TreeTag::kFree) {
          trees_.tag[*q] = TreeTag::kSink;
          trees_.parent[*q] = static_cast<std::int32_t>(m);
          activate(*q);
        } else if (tq == TreeTag::kSource) {
          augment(*q, m);
          return true;
        }
      }
    }
    return false;
  }

  std::uint64_t parent_of(std::uint64_t x) const {
    return *neighbor(x, static_cast<EdgeSlot>(trees_.parent[x]));
  }

  void make_orphan(std::uint64_t x) {
    trees_.parent[x] = SearchTreeState::kOrphan;
    orphans_.push_back(static_cast<VertexIndex>(x));
  }

  // Augments along s ~> from -> (bridge slot) -> to ~> t.
  void augment(std::uint64_t from, EdgeSlot bridge) {
    const std::uint64_t to = *neighbor(from, bridge);
    Capacity delta = store_.capacity(from, bridge);
    std::uint64_t x = from;
    while (trees_.parent[x] != SearchTreeState::kTerminalParent) {
      const auto ps = static_cast<EdgeSlot>(trees_.parent[x]);
      const std::uint64_t y = parent_of(x);
      delta = std::min(delta, store_.capacity(y, layout_.mate_slot(ps)));
      x = y;
    }
    delta = std::min(delta, store_.capacity(x, layout_.source_slot()));
    x = to;
    while (trees_.parent[x] != SearchTreeState::kTerminalParent) {
      const auto ps = static_cast<EdgeSlot>(trees_.parent[x]);
      delta = std::min(delta, store_.capacity(x, ps));
      x = parent_of(x);
    }
    delta = std::min(delta, store_.capacity(x, layout_.sink_slot()));

    store_.capacity(from, bridge) -= delta;
    store_.capacity(to, layout_.mate_slot(bridge)) += delta;

    x = from;
    while (trees_.parent[x] != SearchTreeState::kTerminalParent) {
      const auto ps = static_cast<EdgeSlot>(trees_.parent[x]);
      const std::uint64_t y = parent_of(x);
      Capacity& down = store_.capacity(y, layout_.mate_slot(ps));
      down -= delta;
      store_.capacity(x, ps) += delta;
      if (down == 0) make_orphan(x);
      x = y;
    }
    Capacity& src = store_.capacity(x, layout_.source_slot());
    src -= delta;
    if (src == 0) make_orphan(x);

    x = to;
    while (trees_.parent[x] != SearchTreeState::kTerminalParent) {
      const auto ps = static_cast<EdgeSlot>(trees_.parent[x]);
      const std::uint64_t y = parent_of(x);
      Capacity& up = store_.capacity(x, ps);
      up -= delta;
      store_.capacity(y, layout_.mate_slot(ps)) += delta;
      if (up == 0) make_orphan(x);
      x = y;
    }
    Capacity& snk = store_.capacity(x, layout_.sink_slot());
    snk -= delta;
    if (snk == 0) make_orphan(x);

    flow_ += delta;
    ++augmentations_;
  }

  // True when q's parent chain ends at a terminal rather than an orphan.
  bool rooted(std::uint64_t q) const {
    std::uint64_t x = q;
    for (;;) {
      const std::int32_t ps = trees_.parent[x];
      if (ps == SearchTreeState::kTerminalParent) return true;
      if (ps < 0) return false;
      x = parent_of(x);
    }
  }

  // Residual capacity on the arc that would carry flow from q into p (source
  // tree) or from p into q (sink tree).
  Capacity tree_residual(TreeTag t, std::uint64_t p, EdgeSlot e,
                         std::uint64_t q) const {
    return t == TreeTag::kSource ? store_.capacity(q, layout_.mate_slot(e))
                                 : store_.capacity(p, e);
  }

  void adopt_orphans() {
    while (!orphans_.empty()) {
      const std::uint64_t p = orphans_.front();
      orphans_.pop_front();
      const TreeTag t = trees_.tag[p];
      const EdgeSlot terminal = t == TreeTag::kSource ? layout_.source_slot()
                                                      : layout_.sink_slot();
      if (store_.capacity(p, terminal) > 0) {
        trees_.parent[p] = SearchTreeState::kTerminalParent;
        continue;
      }
      bool adopted = false;
      for (EdgeSlot e = 0; e < layout_.grid_slots() && !adopted; ++e) {
        const auto q = neighbor(p, e);
        if (!q || !in_region(*q) || trees_.tag[*q] != t) continue;
        if (tree_residual(t, p, e, *q) == 0 || !rooted(*q)) continue;
        trees_.parent[p] = static_cast<std::int32_t>(e);
        adopted = true;
      }
      if (adopted) continue;
      for (EdgeSlot e = 0; e < layout_.grid_slots(); ++e) {
        const auto q = neighbor(p, e);
        if (!q || !in_region(*q) || trees_.tag[*q] != t) continue;
        if (tree_residual(t, p, e, *q) > 0) activate(*q);
        if (trees_.parent[*q] == static_cast<std::int32_t>(layout_.mate_slot(e))) {
          make_orphan(*q);
        }
      }
      trees_.tag[p] = TreeTag::kFree;
      trees_.parent[p] = SearchTreeState::kNoParent;
    }
  }

  CapacityStore& store_;
  const GraphTopology& topo_;
  const SlotLayout& layout_;
  SearchTreeState& trees_;
  std::span<const std::uint32_t> region_of_;
  std::uint32_t region_;
  std::deque<VertexIndex> active_;
  std::deque<VertexIndex> orphans_;
  FlowValue flow_ = 0;
  std::uint64_t augmentations_ = 0;
};

// Serial BK over the whole volume; mutates the store into the max-flow
// residual and returns |f|.
inline FlowValue bk_maxflow(CapacityStore& store) {
  const std::uint64_t n = store.vertex_count();
  SearchTreeState trees(n);
  std::vector<std::uint32_t> region(n, 0);
  BkRegionSolver solver(store, trees, region, 0);
  for (std::uint64_t v = 0; v < n; ++v) solver.seed(v);
  return solver.run();
}

}  // namespace gridflow

#endif  // GRIDFLOW_BK_HPP_
