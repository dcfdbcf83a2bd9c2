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

TEST(SplitRange, RemainderToTheFront) {
  EXPECT_EQ(split_range(7, 2), (std::vector<std::uint32_t>{0, 4, 7}));
  EXPECT_EQ(split_range(8, 4), (std::vector<std::uint32_t>{0, 2, 4, 6, 8}));
}

TEST(ParallelBk, TileWithoutSinkArcsFindsNothing) {
  CapacityStore g(dims(3, 2, 1, 1));
  g.set_source_capacity(0, 4);
  g.set_edge_capacity(0, SlotLayout::kUp, 4);
  const CapacityStore g0 = g;
  ParallelBk solver(g, ParallelBkOptions{2, 1, 0, true});
  EXPECT_EQ(solver.solve(), 0);
  EXPECT_EQ(solver.trees().tag[1], TreeTag::kSource);
}

TEST(ParallelBk, SingleTileMatchesSerialBk) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    InstanceOptions o;
    o.seed = seed;
    o.dims = dims(4, 3, 3, 2);
    const CapacityStore g0 = generate_instance(o);
    CapacityStore a = g0;
    CapacityStore b = g0;
    EXPECT_EQ(parallel_bk_maxflow(a, {}), bk_maxflow(b)) << seed;
  }
}

// s -> v0 -> v1 -> t, each capacity 5, with v0 and v1 in different tiles:
// round 0 finds nothing, the merged round finds everything.
TEST(ParallelBk, CrossTileDeficitIsRecoveredAfterMerge) {
  CapacityStore g(dims(1, 2, 1, 0));
  g.set_source_capacity(0, 5);
  g.set_edge_capacity(0, g.layout().lateral(Neighbor::kRight, 0), 5);
  g.set_sink_capacity(1, 5);
  const CapacityStore g0 = g;
  ParallelBk solver(g, ParallelBkOptions{2, 1, 0, true});
  EXPECT_EQ(solver.solve(), 5);
  ASSERT_EQ(solver.rounds().size(), 2u);
  EXPECT_EQ(solver.rounds()[0].flow(), 0);
  EXPECT_LT(solver.rounds()[0].flow(), testing::oracle_value(g0));
  EXPECT_EQ(solver.rounds()[1].flow(), 5);
  EXPECT_GT(solver.rounds()[1].reactivated, 0u);
  EXPECT_TRUE(check_flow(g0, g).ok);
}

TEST(ParallelBk, IdenticalSeamTagsReactivateNothing) {
  // Two disconnected tiles, each with its own s-t path.
  CapacityStore g(dims(2, 2, 1, 0));
  g.set_source_capacity(0, 3);
  g.set_edge_capacity(0, SlotLayout::kUp, 3);
  g.set_sink_capacity(1, 3);
  g.set_source_capacity(2, 2);
  g.set_edge_capacity(2, SlotLayout::kUp, 2);
  g.set_sink_capacity(3, 2);
  ParallelBk solver(g, ParallelBkOptions{2, 1, 0, true});
  EXPECT_EQ(solver.solve(), 5);
  ASSERT_EQ(solver.rounds().size(), 2u);
  EXPECT_EQ(solver.rounds()[1].reactivated, 0u);
  EXPECT_EQ(solver.rounds()[1].flow(), 0);
}

TEST(ParallelBk, OddGroupCountMerges) {
  InstanceOptions o;
  o.seed = 5;
  o.dims = dims(3, 5, 3, 1);
  const CapacityStore g0 = generate_instance(o);
  CapacityStore g = g0;
  ParallelBk solver(g, ParallelBkOptions{5, 3, 0, true});
  EXPECT_EQ(solver.solve(), testing::oracle_value(g0));
  EXPECT_EQ(solver.rounds().back().group_flow.size(), 1u);
}

TEST(ParallelBk, RejectsTilingFinerThanGrid) {
  CapacityStore g(dims(2, 2, 1, 0));
  EXPECT_THROW(ParallelBk(g, ParallelBkOptions{3, 1, 0, false}), Error);
  EXPECT_THROW(ParallelBk(g, ParallelBkOptions{0, 1, 0, false}), Error);
}

TEST(ParallelBk, RandomTilingsMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    InstanceOptions o;
    o.seed = seed;
    o.dims = dims(1 + seed % 5, 4, 4, static_cast<std::uint32_t>(seed % 3));
    const CapacityStore g0 = generate_instance(o);
    const FlowValue expected = testing::oracle_value(g0);
    for (auto [tc, ts] : {std::pair{2u, 1u}, std::pair{2u, 2u}, std::pair{4u, 3u}}) {
      CapacityStore g = g0;
      ParallelBkOptions opts{tc, ts, 2, true};
      ASSERT_EQ(parallel_bk_maxflow(g, opts), expected) << seed;
      ASSERT_TRUE(check_flow(g0, g).ok) << seed;
    }
  }
}

}  // namespace
}  // namespace gridflow
