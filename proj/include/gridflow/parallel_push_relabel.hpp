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

// Column-partitioned parallel push-relabel.
//
// Each segment (a contiguous range of columns) is owned by one worker thread
// with its own FIFO queue. Vertices in the first/last column of a segment
// that borders another segment are "lockable": their residual blocks and
// excess can be touched by two workers and are guarded by a per-vertex
// mutex. Everything else is owner-exclusive.
//
// Global relabeling runs as numbered waves. A supervisory thread raises a
// wave once enough discharges have accumulated; workers finish the vertex in
// hand, meet at a barrier, and advance a reverse BFS from t one level per
// barrier phase.
//
// Phase one ends when no vertex has excess and a label below n; the flow
// value is final at that point. Phase two (serial) returns the remaining
// excess to s so the result is a proper flow.

#ifndef GRIDFLOW_PARALLEL_PUSH_RELABEL_HPP_
#define GRIDFLOW_PARALLEL_PUSH_RELABEL_HPP_

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "gridflow/error.hpp"
#include "gridflow/flow_state.hpp"
#include "gridflow/push_relabel.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

struct Partition {
  std::uint32_t segment_count = 0;
  std::uint64_t column_stride = 0;
  // first_column[i] .. first_column[i + 1] - 1 belong to segment i.
  std::vector<std::uint32_t> first_column;
  std::vector<std::uint32_t> segment_of_column;
  // Per column: index among lockable columns, or kNotLockable.
  std::vector<std::uint32_t> lock_column;
  std::uint32_t lockable_column_count = 0;

  static constexpr std::uint32_t kNotLockable =
      std::numeric_limits<std::uint32_t>::max();

  std::uint32_t segment_of(std::uint64_t v) const {
    return segment_of_column[v / column_stride];
  }
  bool is_lockable(std::uint64_t v) const {
    return lock_column[v / column_stride] != kNotLockable;
  }
  std::uint64_t lock_index(std::uint64_t v) const {
    return std::uint64_t{lock_column[v / column_stride]} * column_stride +
           v % column_stride;
  }
  std::uint32_t columns_in(std::uint32_t segment) const {
    return first_column[segment + 1] - first_column[segment];
  }
  std::uint64_t first_vertex(std::uint32_t segment) const {
    return first_column[segment] * column_stride;
  }
  std::uint64_t end_vertex(std::uint32_t segment) const {
    return first_column[segment + 1] * column_stride;
  }
};

// Splits the columns into near-equal contiguous ranges; the first
// (C mod count) segments get one extra column. Lateral edges only reach the
// adjacent column, so exactly the columns on either side of an internal
// boundary are lockable.
inline Partition partition(const VolumeDims& dims, std::uint32_t segment_count) {
  if (segment_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "segment count must be >= 1");
  }
  if (segment_count > dims.columns) {
    throw Error(ErrorCode::kTooManySegments,
                std::to_string(segment_count) + " segments for " +
                    std::to_string(dims.columns) + " columns");
  }
  Partition p;
  p.segment_count = segment_count;
  p.column_stride = dims.column_stride();
  p.first_column.resize(segment_count + 1);
  p.segment_of_column.resize(dims.columns);
  p.lock_column.assign(dims.columns, Partition::kNotLockable);
  const std::uint32_t base = dims.columns / segment_count;
  const std::uint32_t extra = dims.columns % segment_count;
  std::uint32_t c = 0;
  for (std::uint32_t i = 0; i < segment_count; ++i) {
    p.first_column[i] = c;
    const std::uint32_t width = base + (i < extra ? 1 : 0);
    for (std::uint32_t k = 0; k < width; ++k) p.segment_of_column[c + k] = i;
    c += width;
  }
  p.first_column[segment_count] = c;
  for (std::uint32_t col = 0; col < dims.columns; ++col) {
    const std::uint32_t seg = p.segment_of_column[col];
    const bool left = col > 0 && p.segment_of_column[col - 1] != seg;
    const bool right =
        col + 1 < dims.columns && p.segment_of_column[col + 1] != seg;
    if (left || right) p.lock_column[col] = p.lockable_column_count++;
  }
  return p;
}

struct ParallelPushRelabelOptions {
  std::uint32_t segments = 1;
  // 0 selects the size-dependent default.
  double global_relabel_factor = 0.0;
  std::uint32_t discharge_tick = 1000;
  // Probability of an injected yield/sleep at scheduling points. Test knob.
  double jitter = 0.0;
  std::uint64_t jitter_seed = 1;
};

struct ParallelPushRelabelStats {
  std::uint64_t discharges = 0;
  std::uint64_t pushes = 0;
  std::uint64_t relabels = 0;
  std::uint64_t lock_failures = 0;
  std::uint64_t waves = 0;
  std::uint64_t terminations = 0;
  std::uint64_t phase_two_discharges = 0;
};

class ParallelPushRelabel {
 public:
  ParallelPushRelabel(CapacityStore& store,
                      ParallelPushRelabelOptions options = {})
      : store_(store),
        layout_(store.layout()),
        options_(options),
        part_(partition(store.dims(), options.segments)),
        state_(store.vertex_count()),
        n_(store.vertex_count()),
        next_(n_, kNil),
        prev_(n_, kNil),
        in_queue_(n_, 0),
        locks_(std::make_unique<std::mutex[]>(
            std::uint64_t{part_.lockable_column_count} * part_.column_stride)),
        workers_(part_.segment_count) {
    if (options_.global_relabel_factor <= 0.0) {
      options_.global_relabel_factor = default_global_relabel_factor(n_);
    }
    if (options_.discharge_tick == 0) options_.discharge_tick = 1;
    for (std::uint32_t i = 0; i < workers_.size(); ++i) {
      workers_[i].rng.seed(options_.jitter_seed * 0x9E3779B97F4A7C15ull + i);
    }
  }

  const Partition& partition_info() const { return part_; }
  const FlowState& state() const { return state_; }
  const ParallelPushRelabelStats& stats() const { return stats_; }
  std::uint32_t current_wave() const { return wave_number_; }

  // Saturates the source arcs, labels by exact BFS to t (unreachable -> n)
  // and fills the segment queues.
  void initialize() {
    for (std::uint64_t v = 0; v < n_; ++v) {
      const Capacity c = store_.source_capacity(v);
      state_.source_capacity[v] = c;
      state_.excess[v] = c;
      store_.set_source_capacity(v, 0);
    }
    state_.flow_value = 0;
    global_relabel(store_, state_, RelabelScope::kSinkOnly);
    std::fill(state_.wave.begin(), state_.wave.end(), 0);
    wave_number_ = 0;
    rebuild_queues();
  }

  // Installs an externally produced preflow state (labels must be valid).
  void adopt_state(FlowState state) {
    state_ = std::move(state);
    wave_number_ = 0;
    for (std::uint32_t w : state_.wave) wave_number_ = std::max(wave_number_, w);
    rebuild_queues();
  }

  // Runs the workers plus the supervisory thread until termination.
  FlowValue run_phase_one() {
    sink_flow_.store(state_.flow_value);
    terminate_.store(false);
    wave_pending_.store(false);
    discharge_counter_.store(0);
    failure_ = nullptr;
    for (auto& w : workers_) {
      w.empty.store(false);
      w.global_check = true;
    }
    const std::uint32_t count = part_.segment_count;
    barrier_ = std::make_unique<std::barrier<WaveCompletion>>(
        count + 1, WaveCompletion{this});
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      threads.emplace_back([this, i] { worker_main(i); });
    }
    coordinator_main();
    for (auto& t : threads) t.join();
    barrier_.reset();
    state_.flow_value = sink_flow_.load();
    collect_stats();
    if (failure_) std::rethrow_exception(failure_);
    return state_.flow_value;
  }

  // One wave with no concurrent discharging: every worker thread joins the
  // level barrier, nothing else runs.
  void run_wave() {
    const std::uint32_t count = part_.segment_count;
    barrier_ = std::make_unique<std::barrier<WaveCompletion>>(
        count, WaveCompletion{this});
    wave_pending_.store(true);
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      threads.emplace_back([this, i] { wave_participant(static_cast<int>(i)); });
    }
    for (auto& t : threads) t.join();
    barrier_.reset();
    collect_stats();
  }

  // Empty string when no vertex is left with excess and a label below n and
  // the queues hold nothing active.
  std::string check_phase_one_postcondition() const {
    const Label n = state_.source_label();
    for (std::uint64_t v = 0; v < n_; ++v) {
      if (state_.excess[v] < 0) {
        return "negative excess at vertex " + std::to_string(v);
      }
      if (state_.excess[v] > 0 && state_.label[v] < n) {
        return "active vertex " + std::to_string(v) + " left after phase one";
      }
    }
    return {};
  }

  // Serial phase two: sends the stranded excess back to s.
  FlowValue complete_flow() {
    SerialPushRelabel serial(store_, state_);
    serial.global_relabel();
    serial.rebuild_queue();
    serial.discharge_fifo_loop();
    stats_.phase_two_discharges = serial.stats().discharges;
    state_ = serial.state();
    return state_.flow_value;
  }

  FlowValue solve() {
    initialize();
    run_phase_one();
    return complete_flow();
  }

 private:
  static constexpr VertexIndex kNil = std::numeric_limits<VertexIndex>::max();

  struct WorkerState {
    std::mutex queue_mutex;
    VertexIndex head = kNil;
    VertexIndex tail = kNil;
    // Set only with queue_mutex and the exclusive flag lock held.
    std::atomic<bool> empty{false};
    bool global_check = true;
    std::uint64_t tally = 0;

    std::vector<VertexIndex> level[2];
    std::mutex level_mutex;

    std::mt19937_64 rng;
    ParallelPushRelabelStats stats;
  };

  struct WaveCompletion {
    ParallelPushRelabel* self;
    void operator()() noexcept { self->on_barrier(); }
  };

  enum class WavePhase { kStart, kSeed, kLevel, kFinish };

  // --- label / wave access (may be read across segments) ---
  Label load_label(std::uint64_t v) const {
    return std::atomic_ref<Label>(const_cast<Label&>(state_.label[v]))
        .load(std::memory_order_relaxed);
  }
  void store_label(std::uint64_t v, Label d) {
    std::atomic_ref<Label>(state_.label[v]).store(d, std::memory_order_relaxed);
  }
  std::uint32_t load_wave(std::uint64_t v) const {
    return std::atomic_ref<std::uint32_t>(
               const_cast<std::uint32_t&>(state_.wave[v]))
        .load(std::memory_order_relaxed);
  }
  void store_wave(std::uint64_t v, std::uint32_t w) {
    std::atomic_ref<std::uint32_t>(state_.wave[v]).store(
        w, std::memory_order_relaxed);
  }

  bool is_active(std::uint64_t v) const {
    return state_.excess[v] > 0 && load_label(v) < state_.source_label();
  }

  std::mutex& lock_of(std::uint64_t v) { return locks_[part_.lock_index(v)]; }

  void jitter(WorkerState& w) {
    if (options_.jitter <= 0.0) return;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(w.rng) >= options_.jitter) return;
    if (coin(w.rng) < 0.5) {
      std::this_thread::yield();
    } else {
      std::this_thread::sleep_for(
          std::chrono::microseconds(1 + w.rng() % 50));
    }
  }

  // --- queues ---
  void rebuild_queues() {
    for (auto& w : workers_) {
      w.head = w.tail = kNil;
    }
    std::fill(in_queue_.begin(), in_queue_.end(), 0);
    for (std::uint64_t v = 0; v < n_; ++v) {
      if (is_active(v)) enqueue_unlocked(workers_[part_.segment_of(v)], v);
    }
  }

  void enqueue_unlocked(WorkerState& w, std::uint64_t v) {
    if (in_queue_[v]) return;
    in_queue_[v] = 1;
    const auto vi = static_cast<VertexIndex>(v);
    next_[v] = kNil;
    prev_[v] = w.tail;
    if (w.tail == kNil) {
      w.head = vi;
    } else {
      next_[w.tail] = vi;
    }
    w.tail = vi;
  }

  // Adds v to its owner's queue and clears the owner's empty flag.
  void enqueue(std::uint64_t v) {
    WorkerState& w = workers_[part_.segment_of(v)];
    std::lock_guard<std::mutex> guard(w.queue_mutex);
    enqueue_unlocked(w, v);
    if (w.empty.load(std::memory_order_relaxed)) {
      std::unique_lock<std::shared_mutex> flags(flag_mutex_);
      w.empty.store(false);
    }
  }

  bool pop(WorkerState& w, std::uint64_t& v) {
    std::lock_guard<std::mutex> guard(w.queue_mutex);
    if (w.head == kNil) return false;
    v = w.head;
    w.head = next_[v];
    if (w.head == kNil) {
      w.tail = kNil;
    } else {
      prev_[w.head] = kNil;
    }
    next_[v] = prev_[v] = kNil;
    in_queue_[v] = 0;
    return true;
  }

  // Raises the worker's empty flag if its queue is (still) empty.
  void mark_empty(WorkerState& w) {
    std::lock_guard<std::mutex> guard(w.queue_mutex);
    if (w.head != kNil || w.empty.load(std::memory_order_relaxed)) return;
    std::unique_lock<std::shared_mutex> flags(flag_mutex_);
    w.empty.store(true);
  }

  bool is_queue_empty() {
    std::shared_lock<std::shared_mutex> flags(flag_mutex_);
    if (wave_pending_.load()) return false;
    for (const auto& w : workers_) {
      if (!w.empty.load()) return false;
    }
    bool expected = false;
    if (terminate_.compare_exchange_strong(expected, true)) {
      terminations_.fetch_add(1);
    }
    return true;
  }

  // --- discharge (one vertex) ---
  static Capacity clamp_delta(FlowValue excess, Capacity residual) {
    return excess < static_cast<FlowValue>(residual)
               ? static_cast<Capacity>(excess)
               : residual;
  }

  Label relabel_target(std::uint64_t v) const {
    const OffsetEntry* row = store_.topology().cache_row(v);
    const Capacity* block = store_.block(v);
    Label best = std::numeric_limits<Label>::max();
    for (EdgeSlot e = 0; e < layout_.grid_slots(); ++e) {
      if (block[e] == 0) continue;
      const std::uint64_t w = static_cast<std::uint64_t>(
          static_cast<std::int64_t>(v) + row[e].delta);
      best = std::min(best, load_label(w) + 1);
    }
    if (block[layout_.sink_slot()] > 0) best = 1;
    if (reverse_source_residual(store_, state_, v) > 0) {
      best = std::min(best, state_.source_label() + 1);
    }
    if (best == std::numeric_limits<Label>::max()) {
      best = state_.disconnected_label();
    }
    return best;
  }

  // v is locked by the caller when lockable. Returns after v's excess is
  // gone, after a relabel, or after a failed try-lock (v re-queued).
  void apply_vertex(WorkerState& worker, std::uint64_t v) {
    const std::uint32_t epn = layout_.edges_per_node();
    const OffsetEntry* row = store_.topology().cache_row(v);
    Capacity* block = store_.block(v);
    FlowValue& ev = state_.excess[v];
    const Label dv = load_label(v);
    [[maybe_unused]] const std::uint32_t seg = part_.segment_of(v);
    for (EdgeSlot e = state_.current_edge[v]; e < epn; ++e) {
      if (e == layout_.source_slot()) continue;
      Capacity& r = block[e];
      if (r == 0) continue;
      if (e == layout_.sink_slot()) {
        if (dv != 1) continue;
        const Capacity delta = clamp_delta(ev, r);
        r -= delta;
        ev -= delta;
        sink_flow_.fetch_add(delta, std::memory_order_relaxed);
        ++worker.stats.pushes;
      } else {
        const std::uint64_t w = static_cast<std::uint64_t>(
            static_cast<std::int64_t>(v) + row[e].delta);
        const bool lock_w = part_.is_lockable(w);
        std::unique_lock<std::mutex> guard;
        if (lock_w) {
          jitter(worker);
          guard = std::unique_lock<std::mutex>(lock_of(w), std::try_to_lock);
          if (!guard.owns_lock()) {
            ++worker.stats.lock_failures;
            state_.current_edge[v] = e;
            enqueue(v);
            return;
          }
        }
        const Label dw = load_label(w);
        if (dv == dw + 1) {
          GRIDFLOW_DCHECK(part_.segment_of(w) == seg ||
                          load_wave(v) == load_wave(w));
          const Capacity delta = clamp_delta(ev, r);
          r -= delta;
          store_.capacity(w, row[e].mate_slot) += delta;
          ev -= delta;
          const bool was_idle = state_.excess[w] == 0;
          state_.excess[w] += delta;
          ++worker.stats.pushes;
          if (was_idle && dw < state_.source_label()) enqueue(w);
        }
      }
      if (ev == 0) {
        state_.current_edge[v] = e;
        return;
      }
    }
    const Label newd = relabel_target(v);
    if (newd > dv) store_label(v, newd);
    ++worker.stats.relabels;
    state_.current_edge[v] = 0;
    if (is_active(v)) enqueue(v);
  }

  void process(WorkerState& worker, std::uint64_t v) {
    std::unique_lock<std::mutex> guard;
    if (part_.is_lockable(v)) guard = std::unique_lock<std::mutex>(lock_of(v));
    if (!is_active(v)) return;
    apply_vertex(worker, v);
    ++worker.stats.discharges;
    if (++worker.tally >= options_.discharge_tick) {
      discharge_counter_.fetch_add(worker.tally, std::memory_order_relaxed);
      worker.tally = 0;
    }
  }

  // --- worker loop ---
  void worker_main(std::uint32_t index) {
    WorkerState& worker = workers_[index];
    bool failed = false;
    for (;;) {
      if (wave_pending_.load()) {
        wave_participant(static_cast<int>(index));
        worker.global_check = true;
        continue;
      }
      if (terminate_.load(std::memory_order_relaxed)) break;
      std::uint64_t v = 0;
      if (!failed && pop(worker, v)) {
        jitter(worker);
        try {
          process(worker, v);
        } catch (...) {
          record_failure(std::current_exception());
          failed = true;
        }
        worker.global_check = true;
        continue;
      }
      mark_empty(worker);
      if (worker.global_check) {
        worker.global_check = false;
        if (is_queue_empty()) break;
      }
      std::this_thread::yield();
    }
  }

  void record_failure(std::exception_ptr e) {
    std::unique_lock<std::shared_mutex> flags(flag_mutex_);
    if (!failure_) failure_ = e;
    terminate_.store(true);
  }

  void coordinator_main() {
    const std::uint64_t period =
        global_relabel_period(options_.global_relabel_factor, n_);
    for (;;) {
      if (wave_pending_.load()) {
        wave_participant(-1);
        continue;
      }
      if (terminate_.load()) break;
      if (discharge_counter_.load(std::memory_order_relaxed) >= period) {
        std::unique_lock<std::shared_mutex> flags(flag_mutex_);
        if (!terminate_.load()) wave_pending_.store(true);
        continue;
      }
      std::this_thread::sleep_for(std::chrono::microseconds(20));
    }
  }

  // --- one wave, executed by every barrier participant. worker < 0
  // is the supervisory thread, which only keeps the barrier count. ---
  void wave_participant(int worker) {
    barrier_->arrive_and_wait();
    if (worker >= 0) seed_level(workers_[worker], static_cast<std::uint32_t>(worker));
    barrier_->arrive_and_wait();
    while (!wave_done_) {
      if (worker >= 0) expand_level(workers_[worker]);
      barrier_->arrive_and_wait();
    }
    if (worker >= 0) finalize_wave(static_cast<std::uint32_t>(worker));
    barrier_->arrive_and_wait();
  }

  void on_barrier() {
    switch (wave_phase_) {
      case WavePhase::kStart:
        ++wave_number_;
        ++waves_;
        level_ = 1;
        level_added_.store(0);
        wave_done_ = false;
        discharge_counter_.store(0);
        wave_phase_ = WavePhase::kSeed;
        break;
      case WavePhase::kSeed:
        // Level 1 is the seeds themselves; expansion starts from it.
        wave_done_ = level_added_.load() == 0;
        level_added_.store(0);
        wave_phase_ = wave_done_ ? WavePhase::kFinish : WavePhase::kLevel;
        break;
      case WavePhase::kLevel:
        if (level_added_.load() == 0) {
          wave_done_ = true;
          wave_phase_ = WavePhase::kFinish;
        } else {
          ++level_;
          level_added_.store(0);
        }
        break;
      case WavePhase::kFinish: {
        std::unique_lock<std::shared_mutex> flags(flag_mutex_);
        wave_pending_.store(false);
        wave_phase_ = WavePhase::kStart;
        break;
      }
    }
  }

  void seed_level(WorkerState& w, std::uint32_t segment) {
    auto& out = w.level[level_ % 2];
    out.clear();
    w.level[(level_ + 1) % 2].clear();
    for (std::uint64_t v = part_.first_vertex(segment);
         v < part_.end_vertex(segment); ++v) {
      if (store_.sink_capacity(v) == 0) continue;
      std::unique_lock<std::mutex> guard;
      if (part_.is_lockable(v)) guard = std::unique_lock<std::mutex>(lock_of(v));
      store_label(v, 1);
      store_wave(v, wave_number_);
      out.push_back(static_cast<VertexIndex>(v));
    }
    level_added_.fetch_add(out.size());
  }

  void push_level(std::uint64_t w, std::uint32_t slot) {
    WorkerState& owner = workers_[part_.segment_of(w)];
    std::lock_guard<std::mutex> guard(owner.level_mutex);
    owner.level[slot].push_back(static_cast<VertexIndex>(w));
  }

  // Relabels the unvisited residual predecessors of this worker's level-L
  // vertices with L + 1.
  void expand_level(WorkerState& worker) {
    const std::uint32_t wave = wave_number_;
    const Label next = static_cast<Label>(level_) + 1;
    const std::uint32_t out_slot = (level_ + 1) % 2;
    std::vector<VertexIndex> frontier;
    frontier.swap(worker.level[level_ % 2]);
    struct Pending {
      VertexIndex v;
      EdgeSlot pos;
    };
    std::vector<Pending> work;
    work.reserve(frontier.size());
    for (VertexIndex v : frontier) work.push_back({v, 0});
    std::uint64_t added = 0;
    for (std::size_t head = 0; head < work.size(); ++head) {
      const Pending item = work[head];
      const std::uint64_t v = item.v;
      const OffsetEntry* row = store_.topology().cache_row(v);
      for (EdgeSlot e = item.pos; e < layout_.grid_slots(); ++e) {
        const auto w = store_.topology().target(v, e);
        if (!w) continue;
        if (store_.capacity(*w, row[e].mate_slot) == 0) continue;
        if (load_wave(*w) == wave) continue;
        std::unique_lock<std::mutex> guard;
        if (part_.is_lockable(*w)) {
          jitter(worker);
          guard = std::unique_lock<std::mutex>(lock_of(*w), std::try_to_lock);
          if (!guard.owns_lock()) {
            ++worker.stats.lock_failures;
            work.push_back({item.v, e});
            break;
          }
        }
        if (load_wave(*w) == wave) continue;
        store_label(*w, next);
        store_wave(*w, wave);
        push_level(*w, out_slot);
        ++added;
      }
    }
    level_added_.fetch_add(added);
  }

  void finalize_wave(std::uint32_t segment) {
    WorkerState& w = workers_[segment];
    w.level[0].clear();
    w.level[1].clear();
    const Label n = state_.source_label();
    std::lock_guard<std::mutex> guard(w.queue_mutex);
    for (std::uint64_t v = part_.first_vertex(segment);
         v < part_.end_vertex(segment); ++v) {
      // Not reached from t: the wave leaves a fresh valid labeling, so
      // every such vertex gets exactly n.
      if (load_wave(v) != wave_number_) {
        store_label(v, n);
        store_wave(v, wave_number_);
      }
      state_.current_edge[v] = 0;
      if (is_active(v)) enqueue_unlocked(w, v);
    }
    if (w.head != kNil) w.empty.store(false);
  }

  void collect_stats() {
    ParallelPushRelabelStats total;
    for (auto& w : workers_) {
      total.discharges += w.stats.discharges;
      total.pushes += w.stats.pushes;
      total.relabels += w.stats.relabels;
      total.lock_failures += w.stats.lock_failures;
    }
    total.waves = waves_;
    total.terminations = terminations_.load();
    total.phase_two_discharges = stats_.phase_two_discharges;
    stats_ = total;
  }

  CapacityStore& store_;
  const SlotLayout& layout_;
  ParallelPushRelabelOptions options_;
  Partition part_;
  FlowState state_;
  std::uint64_t n_;

  std::vector<VertexIndex> next_;
  std::vector<VertexIndex> prev_;
  std::vector<std::uint8_t> in_queue_;
  std::unique_ptr<std::mutex[]> locks_;
  std::vector<WorkerState> workers_;

  std::shared_mutex flag_mutex_;
  std::atomic<bool> terminate_{false};
  std::atomic<bool> wave_pending_{false};
  std::atomic<std::uint64_t> discharge_counter_{0};
  std::atomic<FlowValue> sink_flow_{0};
  std::atomic<std::uint64_t> terminations_{0};
  std::exception_ptr failure_;

  std::unique_ptr<std::barrier<WaveCompletion>> barrier_;
  WavePhase wave_phase_ = WavePhase::kStart;
  std::uint32_t wave_number_ = 0;
  std::uint32_t level_ = 0;
  std::atomic<std::uint64_t> level_added_{0};
  bool wave_done_ = false;
  std::uint64_t waves_ = 0;

  ParallelPushRelabelStats stats_;
};

inline FlowValue parallel_push_relabel_maxflow(
    CapacityStore& store, ParallelPushRelabelOptions options = {}) {
  ParallelPushRelabel solver(store, options);
  return solver.solve();
}

}  // namespace gridflow

#endif  // GRIDFLOW_PARALLEL_PUSH_RELABEL_HPP_
