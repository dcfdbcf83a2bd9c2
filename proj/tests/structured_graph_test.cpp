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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace gridflow {
namespace {

using testing::dims;

TEST(VertexIndex, Examples) {
  const VolumeDims d = dims(2, 2, 1, 0);
  EXPECT_EQ(vertex_index(0, 0, 0, d).index(), 0u);
  EXPECT_EQ(vertex_index(1, 0, 1, d).index(), 3u);
  EXPECT_THROW(vertex_index(2, 0, 0, d), Error);
}

TEST(VertexIndex, RoundTripsThroughGridCoord) {
  const VolumeDims d = dims(3, 4, 2, 1);
  for (std::uint32_t c = 0; c < d.columns; ++c) {
    for (std::uint32_t s = 0; s < d.slices; ++s) {
      for (std::uint32_t r = 0; r < d.rows; ++r) {
        const GridCoord g = grid_coord(vertex_index(c, s, r, d).index(), d);
        EXPECT_EQ(g.column, c);
        EXPECT_EQ(g.slice, s);
        EXPECT_EQ(g.row, r);
      }
    }
  }
}

TEST(VertexIndex, TableScaleDimsFitWithoutOverflow) {
  const VolumeDims d = dims(551, 426, 426, 10);
  EXPECT_NO_THROW(validate_dims(d));
  EXPECT_EQ(d.vertex_count(), 551ull * 426 * 426);
  const auto last = vertex_index(425, 425, 550, d);
  EXPECT_EQ(last.index(), d.vertex_count() - 1);
  EXPECT_EQ(edge_base(last, d), (d.vertex_count() - 1) * 88);
}

TEST(EdgeBase, Examples) {
  EXPECT_EQ(edge_base(VertexId::grid(0), dims(1, 1, 1, 10)), 0u);
  EXPECT_EQ(dims(1, 1, 1, 10).edges_per_node(), 88u);
  EXPECT_EQ(edge_base(VertexId::grid(5), dims(1, 6, 1, 1)), 80u);
  EXPECT_EQ(edge_base(VertexId::grid(2), dims(1, 3, 1, 0)), 16u);
  EXPECT_THROW(edge_base(VertexId::source(), dims(1, 1, 1, 0)), Error);
}

TEST(Mate, VerticalAndLateralExamples) {
  CapacityStore g(dims(3, 2, 1, 1));
  const auto up = mate(VertexId::grid(1), SlotLayout::kUp, g);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->vertex.index(), 2u);
  EXPECT_EQ(up->slot, SlotLayout::kDown);
  EXPECT_FALSE(mate(VertexId::grid(2), SlotLayout::kUp, g));

  const SlotLayout& lay = g.layout();
  const auto right = mate(VertexId::grid(0), lay.lateral(Neighbor::kRight, 1), g);
  ASSERT_TRUE(right);
  EXPECT_EQ(right->vertex.index(), vertex_index(1, 0, 1, g.dims()).index());
  EXPECT_EQ(right->slot, lay.lateral(Neighbor::kLeft, -1));
}

TEST(Mate, TerminalsAreRejected) {
  CapacityStore g(dims(2, 2, 1, 1));
  EXPECT_THROW(mate(VertexId::sink(), 0, g), Error);
  EXPECT_THROW(mate(VertexId::grid(0), g.layout().source_slot(), g), Error);
  EXPECT_THROW(mate(VertexId::grid(0), g.layout().edges_per_node(), g), Error);
}

// Exhaustive involution check: mate(mate(v, e)) == (v, e) for every real
// half-edge, and out-of-grid slots have no mate.
TEST(Mate, InvolutionExhaustive) {
  for (std::uint32_t k = 0; k <= 2; ++k) {
    for (std::uint32_t r = 1; r <= 4; ++r) {
      for (std::uint32_t c = 1; c <= 4; ++c) {
        for (std::uint32_t s = 1; s <= 4; ++s) {
          CapacityStore g(dims(r, c, s, k));
          const SlotLayout& lay = g.layout();
          for (std::uint64_t v = 0; v < g.vertex_count(); ++v) {
            const GridCoord from = grid_coord(v, g.dims());
            for (EdgeSlot e = 0; e < lay.grid_slots(); ++e) {
              const auto m = mate(VertexId::grid(v), e, g);
              std::int64_t dr = 0, dc = 0, ds = 0;
              if (e == SlotLayout::kUp) {
                dr = 1;
              } else if (e == SlotLayout::kDown) {
                dr = -1;
              } else {
                dr = lay.lateral_offset(e);
                const Neighbor nb = lay.lateral_neighbor(e);
                dc = nb == Neighbor::kLeft ? -1 : nb == Neighbor::kRight ? 1 : 0;
                ds = nb == Neighbor::kFront ? -1 : nb == Neighbor::kBack ? 1 : 0;
              }
              const std::int64_t tr = from.row + dr;
              const std::int64_t tc = from.column + dc;
              const std::int64_t ts = from.slice + ds;
              const bool inside = tr >= 0 && tr < r && tc >= 0 && tc < c &&
                                  ts >= 0 && ts < s;
              ASSERT_EQ(m.has_value(), inside);
              if (!inside) continue;
              ASSERT_EQ(m->vertex.index(),
                        vertex_index(static_cast<std::uint32_t>(tc),
                                     static_cast<std::uint32_t>(ts),
                                     static_cast<std::uint32_t>(tr), g.dims())
                            .index());
              const auto back = mate(m->vertex, m->slot, g);
              ASSERT_TRUE(back);
              ASSERT_EQ(back->vertex.index(), v);
              ASSERT_EQ(back->slot, e);
            }
          }
        }
      }
    }
  }
}

TEST(CapacityStore, StorageIsFourBytesPerHalfEdge) {
  CapacityStore g(dims(3, 5, 2, 10));
  EXPECT_EQ(g.edge_storage_bytes(), g.vertex_count() * 88 * 4);
  EXPECT_EQ(g.topology().offset_cache().size(), 3u * 2 * 88);
}

TEST(CapacityStore, RejectsOutOfGridCapacity) {
  CapacityStore g(dims(2, 2, 1, 1));
  EXPECT_THROW(g.set_edge_capacity(1, SlotLayout::kUp, 3), Error);
  g.capacity(1, SlotLayout::kUp) = 3;
  EXPECT_THROW(g.validate(), Error);
}

TEST(CapacityStore, MatePairOverflowIsReported) {
  CapacityStore g(dims(2, 1, 1, 0));
  g.set_edge_capacity(0, SlotLayout::kUp, kInfiniteCapacity);
  g.set_edge_capacity(1, SlotLayout::kDown, 1);
  try {
    g.validate();
    FAIL() << "expected CAPACITY_OVERFLOW";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacityOverflow);
  }
}

TEST(Dims, RejectsEmptyAndHugeVolumes) {
  EXPECT_THROW(validate_dims(dims(0, 1, 1, 0)), Error);
  EXPECT_THROW(validate_dims(dims(1u << 20, 1u << 20, 1u << 20, 2)), Error);
}

}  // namespace
}  // namespace gridflow
