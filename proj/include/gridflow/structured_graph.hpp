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

// Proper-order multi-column graph topology with implicit edge addressing.
//
// Vertices are laid out column-major: index = (c * S + s) * R + r, so any
// contiguous range of columns occupies a contiguous range of indices. Every
// vertex owns a fixed-width block of `edges_per_node()` residual capacities
// (4 bytes each). The position of a capacity inside the block encodes the
// direction of the half-edge:
//
//   slot 0                      up    (r + 1)
//   slot 1                      down  (r - 1)
//   slot 2 + nb * (2K+1) + d+K  lateral, neighbor column nb, row offset d
//                               nb: 0 left (c-1), 1 right (c+1),
//                                   2 front (s-1), 3 back (s+1)
//   slot 8K + 6                 source arc, residual s -> v
//   slot 8K + 7                 sink arc, residual v -> t
//
// The mate of a non-terminal half-edge is found through a small offset cache
// keyed by (row, slice, slot). Column boundaries are not represented in the
// cache; half-edges that would leave the grid along the column axis carry
// zero capacity, and their computed target falls outside [0, n).

#ifndef GRIDFLOW_STRUCTURED_GRAPH_HPP_
#define GRIDFLOW_STRUCTURED_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridflow/error.hpp"

namespace gridflow {

using Capacity = std::uint32_t;
using FlowValue = std::int64_t;
using VertexIndex = std::uint32_t;
using EdgeSlot = std::uint32_t;

inline constexpr Capacity kInfiniteCapacity =
    std::numeric_limits<Capacity>::max();

struct VolumeDims {
  std::uint32_t rows = 1;
  std::uint32_t columns = 1;
  std::uint32_t slices = 1;
  std::uint32_t edge_interval = 0;

  std::uint64_t vertex_count() const {
    return std::uint64_t{rows} * columns * slices;
  }
  std::uint32_t interval_width() const { return 2 * edge_interval + 1; }
  std::uint32_t edges_per_node() const { return 8 * edge_interval + 8; }
  std::uint64_t column_stride() const {
    return std::uint64_t{rows} * slices;
  }

  friend bool operator==(const VolumeDims&, const VolumeDims&) = default;
};

// Throws kInvalidArgument unless the dimensions describe a non-empty volume
// whose vertex labels (up to 2n + 1) fit a 32-bit index.
inline void validate_dims(const VolumeDims& dims) {
  if (dims.rows < 1 || dims.columns < 1 || dims.slices < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "rows, columns and slices must all be >= 1");
  }
  if (dims.edge_interval > 1000) {
    throw Error(ErrorCode::kInvalidArgument, "edge interval too large");
  }
  const std::uint64_t limit =
      (std::uint64_t{std::numeric_limits<std::int32_t>::max()} - 2) / 2;
  // rows * columns cannot wrap; the slice factor is checked by division.
  if (std::uint64_t{dims.rows} * dims.columns > limit / dims.slices) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex count does not fit 32-bit labels");
  }
}

inline std::string to_string(const VolumeDims& dims) {
  return std::to_string(dims.rows) + "x" + std::to_string(dims.columns) + "x" +
         std::to_string(dims.slices);
}

// A vertex of the s-t graph: either a grid vertex or one of the terminals.
class VertexId {
 public:
  enum class Kind : std::uint8_t { kGrid, kSource, kSink };

  static constexpr VertexId grid(std::uint64_t index) {
    return VertexId(Kind::kGrid, index);
  }
  static constexpr VertexId source() { return VertexId(Kind::kSource, 0); }
  static constexpr VertexId sink() { return VertexId(Kind::kSink, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_terminal() const { return kind_ != Kind::kGrid; }
  constexpr std::uint64_t index() const { return index_; }

  friend constexpr bool operator==(VertexId, VertexId) = default;

 private:
  constexpr VertexId(Kind kind, std::uint64_t index)
      : index_(index), kind_(kind) {}

  std::uint64_t index_;
  Kind kind_;
};

struct GridCoord {
  std::uint32_t column = 0;
  std::uint32_t slice = 0;
  std::uint32_t row = 0;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

inline VertexId vertex_index(std::uint32_t column, std::uint32_t slice,
                             std::uint32_t row, const VolumeDims& dims) {
  if (column >= dims.columns || slice >= dims.slices || row >= dims.rows) {
    throw Error(ErrorCode::kOutOfGrid,
                "coordinate (" + std::to_string(column) + "," +
                    std::to_string(slice) + "," + std::to_string(row) +
                    ") outside " + to_string(dims));
  }
  return VertexId::grid((std::uint64_t{column} * dims.slices + slice) *
                            dims.rows +
                        row);
}

inline GridCoord grid_coord(std::uint64_t index, const VolumeDims& dims) {
  GridCoord g;
  g.row = static_cast<std::uint32_t>(index % dims.rows);
  const std::uint64_t column_slice = index / dims.rows;
  g.slice = static_cast<std::uint32_t>(column_slice % dims.slices);
  g.column = static_cast<std::uint32_t>(column_slice / dims.slices);
  return g;
}

inline std::uint64_t edge_base(VertexId v, const VolumeDims& dims) {
  if (v.is_terminal()) {
    throw Error(ErrorCode::kTerminalHasNoBlock,
                "terminals have no edge block");
  }
  return v.index() * dims.edges_per_node();
}

enum class Neighbor : std::uint32_t { kLeft = 0, kRight = 1, kFront = 2, kBack = 3 };

// Slot arithmetic for a fixed edge interval.
class SlotLayout {
 public:
  static constexpr EdgeSlot kUp = 0;
  static constexpr EdgeSlot kDown = 1;
  static constexpr EdgeSlot kFirstLateral = 2;

  explicit constexpr SlotLayout(std::uint32_t edge_interval)
      : interval_(edge_interval) {}

  constexpr std::uint32_t edge_interval() const { return interval_; }
  constexpr std::uint32_t width() const { return 2 * interval_ + 1; }
  constexpr std::uint32_t edges_per_node() const { return 8 * interval_ + 8; }
  constexpr EdgeSlot source_slot() const { return 8 * interval_ + 6; }
  constexpr EdgeSlot sink_slot() const { return 8 * interval_ + 7; }
  // Number of slots that connect two grid vertices.
  constexpr std::uint32_t grid_slots() const { return 8 * interval_ + 6; }

  constexpr bool is_terminal(EdgeSlot slot) const {
    return slot >= source_slot();
  }
  constexpr bool is_lateral(EdgeSlot slot) const {
    return slot >= kFirstLateral && slot < source_slot();
  }

  constexpr EdgeSlot lateral(Neighbor nb, std::int32_t row_offset) const {
    return kFirstLateral + static_cast<std::uint32_t>(nb) * width() +
           static_cast<std::uint32_t>(row_offset +
                                      static_cast<std::int32_t>(interval_));
  }
  constexpr Neighbor lateral_neighbor(EdgeSlot slot) const {
    return static_cast<Neighbor>((slot - kFirstLateral) / width());
  }
  constexpr std::int32_t lateral_offset(EdgeSlot slot) const {
    return static_cast<std::int32_t>((slot - kFirstLateral) % width()) -
           static_cast<std::int32_t>(interval_);
  }

  // Reciprocal slot of a grid half-edge.
  constexpr EdgeSlot mate_slot(EdgeSlot slot) const {
    if (slot == kUp) return kDown;
    if (slot == kDown) return kUp;
    const auto nb = static_cast<std::uint32_t>(lateral_neighbor(slot));
    return lateral(static_cast<Neighbor>(nb ^ 1u), -lateral_offset(slot));
  }

 private:
  std::uint32_t interval_;
};

// Per-(row, slice, slot) mate lookup. `delta` is the signed linear-index
// distance to the neighbor; entries whose target leaves the grid along the
// row or slice axes are marked out of bounds.
struct OffsetEntry {
  static constexpr EdgeSlot kOutOfBounds = std::numeric_limits<EdgeSlot>::max();

  std::int64_t delta = 0;
  EdgeSlot mate_slot = kOutOfBounds;

  bool in_bounds() const { return mate_slot != kOutOfBounds; }
};

inline std::vector<OffsetEntry> build_offset_cache(const VolumeDims& dims) {
  const SlotLayout layout(dims.edge_interval);
  const std::uint32_t epn = layout.edges_per_node();
  const auto R = static_cast<std::int64_t>(dims.rows);
  const auto S = static_cast<std::int64_t>(dims.slices);
  const auto column_stride = R * S;
  std::vector<OffsetEntry> cache(std::size_t{dims.rows} * dims.slices * epn);
  for (std::int64_t s = 0; s < S; ++s) {
    for (std::int64_t r = 0; r < R; ++r) {
      OffsetEntry* row = &cache[static_cast<std::size_t>((s * R + r) * epn)];
      for (EdgeSlot slot = 0; slot < layout.grid_slots(); ++slot) {
        std::int64_t dr = 0;
        std::int64_t ds = 0;
        std::int64_t dc = 0;
        if (slot == SlotLayout::kUp) {
          dr = 1;
        } else if (slot == SlotLayout::kDown) {
          dr = -1;
        } else {
          dr = layout.lateral_offset(slot);
          switch (layout.lateral_neighbor(slot)) {
            case Neighbor::kLeft: dc = -1; break;
            case Neighbor::kRight: dc = 1; break;
            case Neighbor::kFront: ds = -1; break;
            case Neighbor::kBack: ds = 1; break;
          }
        }
        if (r + dr < 0 || r + dr >= R || s + ds < 0 || s + ds >= S) continue;
        row[slot].delta = dc * column_stride + ds * R + dr;
        row[slot].mate_slot = layout.mate_slot(slot);
      }
    }
  }
  return cache;
}

// Immutable topology: dimensions, slot layout and offset cache.
class GraphTopology {
 public:
  explicit GraphTopology(const VolumeDims& dims)
      : dims_((validate_dims(dims), dims)),
        layout_(dims.edge_interval),
        n_(dims.vertex_count()),
        cache_(build_offset_cache(dims)) {}

  const VolumeDims& dims() const { return dims_; }
  const SlotLayout& layout() const { return layout_; }
  std::uint64_t vertex_count() const { return n_; }
  std::uint32_t edges_per_node() const { return layout_.edges_per_node(); }
  std::span<const OffsetEntry> offset_cache() const { return cache_; }
  std::size_t offset_cache_bytes() const {
    return cache_.capacity() * sizeof(OffsetEntry);
  }

  // Pointer to the cache row for vertex v (row/slice part of its index).
  const OffsetEntry* cache_row(std::uint64_t v) const {
    return &cache_[(v % dims_.column_stride()) * layout_.edges_per_node()];
  }

  // Target of grid half-edge `slot` at v, or nullopt when it leaves the grid.
  // No terminal-slot check; see mate() for the checked variant.
  std::optional<std::uint64_t> target(std::uint64_t v, EdgeSlot slot) const {
    const OffsetEntry& e = cache_row(v)[slot];
    if (!e.in_bounds()) return std::nullopt;
    const std::int64_t w = static_cast<std::int64_t>(v) + e.delta;
    if (w < 0 || static_cast<std::uint64_t>(w) >= n_) return std::nullopt;
    return static_cast<std::uint64_t>(w);
  }

  std::uint64_t column_of(std::uint64_t v) const {
    return v / dims_.column_stride();
  }

  // True when the half-edge connects two existing grid vertices. With the
  // column-major ordering a step off either end of the column axis always
  // lands outside [0, n), so target() alone decides.
  bool is_real_edge(std::uint64_t v, EdgeSlot slot) const {
    return !layout_.is_terminal(slot) && target(v, slot).has_value();
  }

 private:
  VolumeDims dims_;
  SlotLayout layout_;
  std::uint64_t n_;
  std::vector<OffsetEntry> cache_;
};

struct MateRef {
  VertexId vertex;
  EdgeSlot slot;

  friend bool operator==(const MateRef&, const MateRef&) = default;
};

// Contiguous per-vertex blocks of residual capacities sharing an immutable
// topology. Copying a store copies the capacities and shares the topology.
class CapacityStore {
 public:
  explicit CapacityStore(const VolumeDims& dims)
      : CapacityStore(std::make_shared<const GraphTopology>(dims)) {}

  explicit CapacityStore(std::shared_ptr<const GraphTopology> topology)
      : topology_(std::move(topology)),
        residual_(topology_->vertex_count() * topology_->edges_per_node(), 0) {}

  const GraphTopology& topology() const { return *topology_; }
  std::shared_ptr<const GraphTopology> shared_topology() const {
    return topology_;
  }
  const VolumeDims& dims() const { return topology_->dims(); }
  const SlotLayout& layout() const { return topology_->layout(); }
  std::uint64_t vertex_count() const { return topology_->vertex_count(); }
  std::uint32_t edges_per_node() const { return topology_->edges_per_node(); }

  std::span<Capacity> residuals() { return residual_; }
  std::span<const Capacity> residuals() const { return residual_; }
  std::size_t edge_storage_bytes() const {
    return residual_.capacity() * sizeof(Capacity);
  }

  Capacity* block(std::uint64_t v) {
    return residual_.data() + v * edges_per_node();
  }
  const Capacity* block(std::uint64_t v) const {
    return residual_.data() + v * edges_per_node();
  }

  Capacity capacity(std::uint64_t v, EdgeSlot slot) const {
    return residual_[v * edges_per_node() + slot];
  }
  Capacity& capacity(std::uint64_t v, EdgeSlot slot) {
    return residual_[v * edges_per_node() + slot];
  }

  Capacity source_capacity(std::uint64_t v) const {
    return capacity(v, layout().source_slot());
  }
  Capacity sink_capacity(std::uint64_t v) const {
    return capacity(v, layout().sink_slot());
  }
  void set_source_capacity(std::uint64_t v, Capacity c) {
    capacity(v, layout().source_slot()) = c;
  }
  void set_sink_capacity(std::uint64_t v, Capacity c) {
    capacity(v, layout().sink_slot()) = c;
  }

  // Sets the capacity of a grid half-edge; rejects slots that do not connect
  // two grid vertices.
  void set_edge_capacity(std::uint64_t v, EdgeSlot slot, Capacity c) {
    if (!topology_->is_real_edge(v, slot)) {
      throw Error(ErrorCode::kOutOfGrid,
                  "slot " + std::to_string(slot) + " of vertex " +
                      std::to_string(v) + " leaves the grid");
    }
    capacity(v, slot) = c;
  }

  // Checks the build-time invariants: half-edges that leave the grid carry
  // zero capacity, and every mate pair sums to at most kInfiniteCapacity.
  void validate() const {
    const SlotLayout& lay = layout();
    for (std::uint64_t v = 0; v < vertex_count(); ++v) {
      for (EdgeSlot slot = 0; slot < lay.grid_slots(); ++slot) {
        const Capacity c = capacity(v, slot);
        if (!topology_->is_real_edge(v, slot)) {
          if (c != 0) {
            throw Error(ErrorCode::kInvalidInstance,
                        "non-zero capacity on a boundary slot of vertex " +
                            std::to_string(v));
          }
          continue;
        }
        const std::uint64_t w = *topology_->target(v, slot);
        const std::uint64_t sum =
            std::uint64_t{c} + capacity(w, lay.mate_slot(slot));
        if (sum > kInfiniteCapacity) {
          throw Error(ErrorCode::kCapacityOverflow,
                      "mate pair capacity sum exceeds 32 bits at vertex " +
                          std::to_string(v));
        }
      }
    }
  }

 private:
  std::shared_ptr<const GraphTopology> topology_;
  std::vector<Capacity> residual_;
};

// Checked mate lookup.
inline std::optional<MateRef> mate(VertexId v, EdgeSlot slot,
                                   const CapacityStore& store) {
  if (v.is_terminal()) {
    throw Error(ErrorCode::kTerminalHasNoBlock, "terminals have no edge block");
  }
  const SlotLayout& layout = store.layout();
  if (slot >= layout.edges_per_node()) {
    throw Error(ErrorCode::kInvalidArgument,
                "slot " + std::to_string(slot) + " out of range");
  }
  if (layout.is_terminal(slot)) {
    throw Error(ErrorCode::kTerminalArcHasNoMate,
                "terminal arcs have no grid mate");
  }
  const auto w = store.topology().target(v.index(), slot);
  if (!w) return std::nullopt;
  return MateRef{VertexId::grid(*w), store.topology().cache_row(v.index())[slot].mate_slot};
}

}  // namespace gridflow

#endif  // GRIDFLOW_STRUCTURED_GRAPH_HPP_
