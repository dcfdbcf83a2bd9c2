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

// Seeded random instances.
//
// The bit stream is std::mt19937_64 (MT19937-64 with the standard
// parameters, fully specified by the C++ standard). Values are mapped to
// ranges with a plain modulo here rather than std::uniform_int_distribution,
// whose algorithm is left to the library, so a seed yields the same bytes on
// every platform.

#ifndef GRIDFLOW_INSTANCE_GEN_HPP_
#define GRIDFLOW_INSTANCE_GEN_HPP_

#include <cstdint>
#include <random>

#include "gridflow/error.hpp"
#include "gridflow/structured_graph.hpp"
#include "gridflow/surface.hpp"

namespace gridflow {

class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform-ish integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }
  bool one_in(std::uint64_t k) { return next() % k == 0; }

 private:
  std::mt19937_64 engine_;
};

struct InstanceOptions {
  VolumeDims dims;
  std::uint64_t seed = 1;
  Capacity max_capacity = 20;
};

// Grid arcs get capacities in [0, max]; each vertex gets a source arc and a
// sink arc in [1, max] with probability 1/3 each. Draw order is vertex-major,
// slot-minor; missing half-edges consume no draws.
inline CapacityStore generate_instance(const InstanceOptions& options) {
  if (options.max_capacity == 0 || options.max_capacity > (1u << 30)) {
    throw Error(ErrorCode::kInvalidArgument, "max capacity must be in [1, 2^30]");
  }
  CapacityStore store(options.dims);
  const GraphTopology& topo = store.topology();
  const SlotLayout& layout = store.layout();
  SeededStream rng(options.seed);
  const std::int64_t max = options.max_capacity;
  for (std::uint64_t v = 0; v < store.vertex_count(); ++v) {
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      if (!topo.is_real_edge(v, e)) continue;
      store.capacity(v, e) = static_cast<Capacity>(rng.range(0, max));
    }
    if (rng.one_in(3)) store.set_source_capacity(v, static_cast<Capacity>(rng.range(1, max)));
    if (rng.one_in(3)) store.set_sink_capacity(v, static_cast<Capacity>(rng.range(1, max)));
  }
  return store;
}

struct WeightOptions {
  VolumeDims dims;
  std::uint64_t seed = 1;
  std::int32_t min_weight = 0;
  std::int32_t max_weight = 9;
  // Cost f(d) = alpha * |d| + beta * d^2 with alpha, beta in [0, max_cost].
  std::int32_t max_cost = 3;
};

inline SurfaceWeights generate_weights(const WeightOptions& options) {
  validate_dims(options.dims);
  if (options.min_weight > options.max_weight || options.max_cost < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad weight/cost range");
  }
  SurfaceWeights w(options.dims);
  SeededStream rng(options.seed);
  for (auto& x : w.vertex_weight) {
    x = static_cast<std::int32_t>(rng.range(options.min_weight, options.max_weight));
  }
  const std::int64_t alpha = rng.range(0, options.max_cost);
  const std::int64_t beta = rng.range(0, options.max_cost);
  const auto K = static_cast<std::int64_t>(options.dims.edge_interval);
  for (std::int64_t d = -K; d <= K; ++d) {
    w.edge_cost[static_cast<std::size_t>(d + K)] =
        static_cast<std::int32_t>(alpha * (d < 0 ? -d : d) + beta * d * d);
  }
  return w;
}

}  // namespace gridflow

#endif  // GRIDFLOW_INSTANCE_GEN_HPP_
