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

// Post-solve invariant checks: feasibility, conservation, maximality,
// cut = flow, agreement with a reference value.

#ifndef GRIDFLOW_VERIFY_HPP_
#define GRIDFLOW_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridflow/error.hpp"
#include "gridflow/flow_state.hpp"
#include "gridflow/solver.hpp"
#include "gridflow/structured_graph.hpp"
#include "gridflow/surface.hpp"

namespace gridflow {

struct VerifyFinding {
  std::string subject;
  std::string invariant;
  bool ok = true;
  std::string detail;
};

struct Verification {
  std::vector<VerifyFinding> findings;

  bool ok() const {
    for (const auto& f : findings) {
      if (!f.ok) return false;
    }
    return true;
  }
  void record(const std::string& subject, const std::string& invariant, bool ok,
              std::string detail = {}) {
    findings.push_back({subject, invariant, ok, std::move(detail)});
  }
};

// `outcome.residual` must hold the residual of a structured solve of
// `original`. The cut is recomputed from the residual, so a tampered
// residual is caught even if `outcome.cut` was computed earlier.
inline void verify_outcome(const CapacityStore& original,
                           const SolveOutcome& outcome,
                           std::optional<FlowValue> expected,
                           const std::string& subject, Verification& v) {
  if (!outcome.residual) {
    v.record(subject, "cut=flow", outcome.cut.cut_capacity == outcome.flow,
             "cut " + std::to_string(outcome.cut.cut_capacity) + ", flow " +
                 std::to_string(outcome.flow));
  } else {
    const FlowCheck fc = check_flow(original, *outcome.residual);
    v.record(subject, "feasibility+conservation", fc.ok, fc.failure);
    if (fc.ok) {
      v.record(subject, "flow value", fc.value == outcome.flow,
               "residual carries " + std::to_string(fc.value) + ", reported " +
                   std::to_string(outcome.flow));
    }
    try {
      const CutResult cut = min_cut(original, *outcome.residual);
      v.record(subject, "cut=flow", cut.cut_capacity == outcome.flow,
               "cut " + std::to_string(cut.cut_capacity) + ", flow " +
                   std::to_string(outcome.flow));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFlowNotMaximal) throw;
      v.record(subject, "maximality", false, e.what());
    }
  }
  if (expected) {
    v.record(subject, "value", outcome.flow == *expected,
             "got " + std::to_string(outcome.flow) + ", expected " +
                 std::to_string(*expected));
  }
}

// Surface checks for a solve of the graph built from `weights`.
inline void verify_surface(const SurfaceWeights& weights, const SurfaceGraph& graph,
                           const SolveOutcome& outcome,
                           std::optional<FlowValue> expected_objective,
                           const std::string& subject, Verification& v) {
  NetSurface net;
  try {
    net = extract_surface(outcome.cut, weights.dims);
  } catch (const Error& e) {
    v.record(subject, "surface", false, e.what());
    return;
  }
  const std::string problem = check_surface(net, weights.dims);
  v.record(subject, "surface", problem.empty(), problem);
  if (!problem.empty()) return;
  const FlowValue objective = surface_objective(weights, net);
  v.record(subject, "objective=cut+offset",
           objective == outcome.flow + graph.offset,
           "objective " + std::to_string(objective) + ", cut+offset " +
               std::to_string(outcome.flow + graph.offset));
  if (expected_objective) {
    v.record(subject, "objective", objective == *expected_objective,
             "got " + std::to_string(objective) + ", minimum " +
                 std::to_string(*expected_objective));
  }
}

// Negative-test helper: zeroes the first positive grid residual without
// touching its mate, which breaks the flow bookkeeping.
inline bool corrupt_residual(CapacityStore& residual) {
  const SlotLayout& layout = residual.layout();
  for (std::uint64_t v = 0; v < residual.vertex_count(); ++v) {
    for (EdgeSlot e = 0; e < layout.grid_slots(); ++e) {
      if (residual.capacity(v, e) > 0) {
        residual.capacity(v, e) = 0;
        return true;
      }
    }
  }
  for (std::uint64_t v = 0; v < residual.vertex_count(); ++v) {
    if (residual.sink_capacity(v) > 0) {
      residual.set_sink_capacity(v, residual.sink_capacity(v) - 1);
      return true;
    }
  }
  return false;
}

}  // namespace gridflow

#endif  // GRIDFLOW_VERIFY_HPP_
