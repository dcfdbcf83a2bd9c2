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

// Backend dispatch plus the post-solve gates shared by the CLI and tests.

#ifndef GRIDFLOW_SOLVER_HPP_
#define GRIDFLOW_SOLVER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gridflow/bk.hpp"
#include "gridflow/error.hpp"
#include "gridflow/flow_state.hpp"
#include "gridflow/oracle.hpp"
#include "gridflow/parallel_bk.hpp"
#include "gridflow/parallel_push_relabel.hpp"
#include "gridflow/push_relabel.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

enum class Backend { kPrSerial, kPrParallel, kBkSerial, kBkParallel, kOracle };

inline constexpr std::array<Backend, 5> kAllBackends = {
    Backend::kPrSerial, Backend::kPrParallel, Backend::kBkSerial,
    Backend::kBkParallel, Backend::kOracle};

inline std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kPrSerial: return "pr-serial";
    case Backend::kPrParallel: return "pr-parallel";
    case Backend::kBkSerial: return "bk-serial";
    case Backend::kBkParallel: return "bk-parallel";
    case Backend::kOracle: return "oracle";
  }
  return "unknown";
}

inline Backend parse_backend(std::string_view name) {
  for (Backend b : kAllBackends) {
    if (backend_name(b) == name) return b;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + std::string(name) + "'");
}

struct SolveOptions {
  Backend backend = Backend::kPrSerial;
  std::uint32_t segments = 1;
  std::uint32_t tile_columns = 1;
  std::uint32_t tile_slices = 1;
  double global_relabel_factor = 0.0;
  // Upper bound on worker threads for bk-parallel (0 = no bound).
  std::uint32_t max_threads = 0;
  double jitter = 0.0;
  std::uint64_t jitter_seed = 1;
};

struct SolveOutcome {
  FlowValue flow = 0;
  // Residual network after the solve (structured backends only).
  std::optional<CapacityStore> residual;
  CutResult cut;
};

// Solves a copy of `original` and derives the minimum cut. Throws
// FLOW_NOT_MAXIMAL if the residual still has an s-t path.
inline SolveOutcome solve_instance(const CapacityStore& original,
                                   const SolveOptions& options) {
  SolveOutcome out;
  if (options.backend == Backend::kOracle) {
    OracleResult r = oracle_maxflow(to_explicit_graph(original));
    out.flow = r.flow;
    out.cut.cut_capacity = r.cut_capacity;
    r.source_side.resize(original.vertex_count());
    out.cut.source_side = std::move(r.source_side);
    return out;
  }
  CapacityStore store = original;
  switch (options.backend) {
    case Backend::kPrSerial: {
      PushRelabelOptions o;
      o.global_relabel_factor = options.global_relabel_factor;
      out.flow = push_relabel_maxflow(store, o);
      break;
    }
    case Backend::kPrParallel: {
      ParallelPushRelabelOptions o;
      o.segments = options.segments;
      o.global_relabel_factor = options.global_relabel_factor;
      o.jitter = options.jitter;
      o.jitter_seed = options.jitter_seed;
      out.flow = parallel_push_relabel_maxflow(store, o);
      break;
    }
    case Backend::kBkSerial:
      out.flow = bk_maxflow(store);
      break;
    case Backend::kBkParallel: {
      ParallelBkOptions o;
      o.tile_columns = options.tile_columns;
      o.tile_slices = options.tile_slices;
      o.max_threads = options.max_threads;
      out.flow = parallel_bk_maxflow(store, o);
      break;
    }
    case Backend::kOracle:
      break;
  }
  out.cut = min_cut(original, store);
  out.residual = std::move(store);
  return out;
}

}  // namespace gridflow

#endif  // GRIDFLOW_SOLVER_HPP_
