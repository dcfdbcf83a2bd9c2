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

// Single-threaded FIFO push-relabel with periodic global relabeling.
//
// The solver mutates the residual capacities of the CapacityStore in place.
// Vertices that cannot reach t return their excess to s through the
// reverse source arcs, so the final state is a flow, not just a preflow.

#ifndef GRIDFLOW_PUSH_RELABEL_HPP_
#define GRIDFLOW_PUSH_RELABEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "gridflow/flow_state.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

// Default global relabel factor: 2 below 20M vertices, 1 above.
inline double default_global_relabel_factor(std::uint64_t n) {
  return n < 20'000'000 ? 2.0 : 1.0;
}

inline std::uint64_t global_relabel_period(double factor, std::uint64_t n) {
  return std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(factor * static_cast<double>(n))));
}

struct PushRelabelOptions {
  // Discharges between global relabels, as a multiple of n. 0 selects the
  // size-dependent default.
  double global_relabel_factor = 0.0;
};

struct PushRelabelStats {
  std::uint64_t discharges = 0;
  std::uint64_t pushes = 0;
  std::uint64_t relabels = 0;
  std::uint64_t global_relabels = 0;
};

class SerialPushRelabel {
 public:
  SerialPushRelabel(CapacityStore& store, PushRelabelOptions options = {})
      : store_(store), state_(store.vertex_count()), options_(options) {
    if (options_.global_relabel_factor <= 0.0) {
      options_.global_relabel_factor =
          default_global_relabel_factor(state_.n);
    }
    in_queue_.assign(state_.n, 0);
  }

  // Continues from a state produced elsewhere (the parallel solver's
  // preflow); capacities in the store must match it.
  SerialPushRelabel(CapacityStore& store, FlowState state,
                    PushRelabelOptions options = {})
      : SerialPushRelabel(store, options) {
    state_ = std::move(state);
  }

  const FlowState& state() const { return state_; }
  FlowState& mutable_state() { return state_; }
  const PushRelabelStats& stats() const { return stats_; }

  bool is_active(std::uint64_t v) const {
    return state_.excess[v] > 0 && state_.label[v] < state_.disconnected_label();
  }

  // Saturates every source arc and computes exact initial labels.
  void initialize_preflow() {
    for (std::uint64_t v = 0; v < state_.n; ++v) {
      const Capacity c = store_.source_capacity(v);
      state_.source_capacity[v] = c;
      state_.excess[v] = c;
      store_.set_source_capacity(v, 0);
    }
    state_.flow_value = 0;
    global_relabel();
    for (std::uint64_t v = 0; v < state_.n; ++v) {
      if (is_active(v)) enqueue(v);
    }
  }

  void global_relabel() {
    gridflow::global_relabel(store_, state_, RelabelScope::kSinkThenSource);
    ++stats_.global_relabels;
  }

  // Pushes min(e(v), r(v, slot)) along an admissible arc. Returns the amount
  // moved; 0 when the arc is not admissible.
  FlowValue push(std::uint64_t v, EdgeSlot slot) {
    const SlotLayout& layout = store_.layout();
    const Label dv = state_.label[v];
    FlowValue& ev = state_.excess[v];
    if (ev <= 0) return 0;
    if (slot == layout.sink_slot()) {
      Capacity& r = store_.capacity(v, slot);
      if (r == 0 || dv != 1) return 0;
      const Capacity delta = clamp_delta(ev, r);
      r -= delta;
      ev -= delta;
      state_.flow_value += delta;
      ++stats_.pushes;
      return delta;
    }
    if (slot == layout.source_slot()) {
      const Capacity r = reverse_source_residual(store_, state_, v);
      if (r == 0 || dv != state_.source_label() + 1) return 0;
      const Capacity delta = clamp_delta(ev, r);
      store_.capacity(v, slot) += delta;
      ev -= delta;
      ++stats_.pushes;
      return delta;
    }
    Capacity& r = store_.capacity(v, slot);
    if (r == 0) return 0;
    const OffsetEntry& entry = store_.topology().cache_row(v)[slot];
    const std::uint64_t w =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(v) + entry.delta);
    if (dv != state_.label[w] + 1) return 0;
    const Capacity delta = clamp_delta(ev, r);
    r -= delta;
    store_.capacity(w, entry.mate_slot) += delta;
    ev -= delta;
    const bool was_idle = state_.excess[w] == 0;
    state_.excess[w] += delta;
    if (was_idle && is_active(w)) enqueue(w);
    ++stats_.pushes;
    return delta;
  }

  // Raises d(v) to 1 + min d(w) over residual arcs. Never lowers a label.
  void relabel(std::uint64_t v) {
    const Label newd = relabel_target(v);
    if (newd > state_.label[v]) state_.label[v] = newd;
    ++stats_.relabels;
  }

  // Scans v's edge block from its cursor, pushing on admissible arcs, and
  // relabels when the block is exhausted.
  void discharge(std::uint64_t v) {
    const std::uint32_t epn = store_.edges_per_node();
    EdgeSlot e = state_.current_edge[v];
    for (; e < epn; ++e) {
      push(v, e);
      if (state_.excess[v] == 0) {
        state_.current_edge[v] = e;
        return;
      }
    }
    relabel(v);
    state_.current_edge[v] = 0;
    if (is_active(v)) enqueue(v);
  }

  FlowValue discharge_fifo_loop() {
    discharge_steps(std::numeric_limits<std::uint64_t>::max());
    return state_.flow_value;
  }

  // Runs at most `max_steps` discharges; true once the queue is drained.
  bool discharge_steps(std::uint64_t max_steps) {
    const std::uint64_t period =
        global_relabel_period(options_.global_relabel_factor, state_.n);
    for (std::uint64_t step = 0; step < max_steps && !queue_.empty();) {
      const std::uint64_t v = queue_.front();
      queue_.pop_front();
      in_queue_[v] = 0;
      if (!is_active(v)) continue;
      discharge(v);
      ++step;
      ++stats_.discharges;
      if (++since_relabel_ >= period) {
        since_relabel_ = 0;
        global_relabel();
      }
    }
    return queue_.empty();
  }

  // Re-queues every active vertex; used when adopting an external state.
  void rebuild_queue() {
    queue_.clear();
    std::fill(in_queue_.begin(), in_queue_.end(), 0);
    for (std::uint64_t v = 0; v < state_.n; ++v) {
      if (is_active(v)) enqueue(v);
    }
  }

  FlowValue solve() {
    initialize_preflow();
    return discharge_fifo_loop();
  }

 private:
  static Capacity clamp_delta(FlowValue excess, Capacity residual) {
    return excess < static_cast<FlowValue>(residual)
               ? static_cast<Capacity>(excess)
               : residual;
  }

  Label relabel_target(std::uint64_t v) const {
    const SlotLayout& layout = store_.layout();
    const OffsetEntry* row = store_.topology().cache_row(v);
    const Capacity* block = store_.block(v);
    Label best = std::numeric_limits<Label>::max();
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      if (block[e] == 0) continue;
      const std::uint64_t w = static_cast<std::uint64_t>(
          static_cast<std::int64_t>(v) + row[e].delta);
      best = std::min(best, state_.label[w] + 1);
    }
    if (block[layout.sink_slot()] > 0) best = 1;
    if (reverse_source_residual(store_, state_, v) > 0) {
      best = std::min(best, state_.source_label() + 1);
    }
    if (best == std::numeric_limits<Label>::max()) {
      best = state_.disconnected_label();
    }
    return best;
  }

  void enqueue(std::uint64_t v) {
    if (in_queue_[v]) return;
    in_queue_[v] = 1;
    queue_.push_back(static_cast<VertexIndex>(v));
  }

  CapacityStore& store_;
  FlowState state_;
  PushRelabelOptions options_;
  PushRelabelStats stats_;
  std::deque<VertexIndex> queue_;
  std::vector<std::uint8_t> in_queue_;
  std::uint64_t since_relabel_ = 0;
};

// Convenience wrapper: solves in place and returns |f|.
inline FlowValue push_relabel_maxflow(CapacityStore& store,
                                      PushRelabelOptions options = {}) {
  SerialPushRelabel solver(store, options);
  return solver.solve();
}

}  // namespace gridflow

#endif  // GRIDFLOW_PUSH_RELABEL_HPP_
