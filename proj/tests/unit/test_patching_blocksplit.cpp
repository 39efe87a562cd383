// Copyright 2026 The burnseg Authors. All Rights Reserved.
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

#include <random>
#include <set>

#include "burnseg/blocksplit.hpp"
#include "burnseg/error.hpp"
#include "burnseg/patching.hpp"
#include "oracles.hpp"

namespace burnseg {
namespace {

using testing::TempDir;

std::vector<std::uint8_t> coverage(const PatchSet& set) {
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(set.source_width * set.source_height), 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Placement& p = set.placements[i];
    for (std::int64_t r = 0; r < set.valid_rows(i); ++r) {
      for (std::int64_t c = 0; c < set.valid_cols(i); ++c) {
        hit[static_cast<std::size_t>((p.row + r) * set.source_width + p.col + c)] = 1;
      }
    }
  }
  return hit;
}

TEST(Patching, StrideFollowsOverlap) {
  EXPECT_EQ((PatchSpec{512, 0.0}).stride(), 512);
  EXPECT_EQ((PatchSpec{512, 0.2}).stride(), 409);
  EXPECT_EQ((PatchSpec{64, 0.2}).stride(), 51);
}

TEST(Patching, OffsetsSnapToEdge) {
  const PatchSpec spec{512, 0.0};
  EXPECT_EQ(window_offsets(512, spec), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(window_offsets(300, spec), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(window_offsets(1100, spec), (std::vector<std::int64_t>{0, 512, 588}));
}

TEST(Patching, RoundTripAndFullCoverage) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> dim(40, 700);
  for (int trial = 0; trial < 10; ++trial) {
    const std::int64_t w = trial == 0 ? 512 : dim(rng);
    const std::int64_t h = trial == 0 ? 1024 : dim(rng);
    const RasterGrid r = testing::random_raster(w, h, 2, rng);
    for (double overlap : {0.0, 0.2}) {
      const PatchSet set = patchify(r, {128, overlap});
      for (const RasterGrid& p : set.patches) {
        ASSERT_EQ(p.width(), 128);
        ASSERT_EQ(p.height(), 128);
      }
      const auto hit = coverage(set);
      EXPECT_EQ(std::count(hit.begin(), hit.end(), 0), 0);
      EXPECT_TRUE(mosaic(set) == r) << w << "x" << h << " overlap " << overlap;
    }
  }
}

TEST(Patching, SmallRasterIsPadded) {
  std::mt19937_64 rng(3);
  const RasterGrid r = testing::random_raster(30, 20, 1, rng);
  const PatchSet set = patchify(r, {64, 0.0, 0.0f});
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.valid_rows(0), 20);
  EXPECT_EQ(set.valid_cols(0), 30);
  EXPECT_EQ(set.patches[0].at(0, 25, 40), 0.0f);
  EXPECT_TRUE(mosaic(set) == r);
}

TEST(Patching, PatchTransformsTrackPlacement) {
  std::mt19937_64 rng(4);
  const RasterGrid r = testing::random_raster(200, 150, 1, rng);
  const PatchSet set = patchify(r, {64, 0.2});
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Placement& p = set.placements[i];
    EXPECT_EQ(set.patches[i].transform(), r.transform().shifted(p.row, p.col));
    EXPECT_EQ(set.patches[i].at(0, 0, 0), r.at(0, p.row, p.col));
  }
}

TEST(Patching, FeatherBlendOfConstantIsConstant) {
  const RasterGrid r = RasterGrid::filled(150, 130, 1, {0, 0, 1, 1, "EPSG:32634"}, RasterKind::kImage, 0.25f);
  const PatchSet set = patchify(r, {64, 0.2});
  EXPECT_TRUE(mosaic(set, BlendMode::kFeather) == r);
}

TEST(Patching, OverlapAveragesCoveringPatches) {
  const GeoTransform gt{0, 0, 1, 1, "EPSG:32634"};
  const RasterGrid a = RasterGrid::filled(4, 4, 1, gt, RasterKind::kProbabilityMap, 0.2f);
  const RasterGrid b = RasterGrid::filled(4, 4, 1, gt, RasterKind::kProbabilityMap, 0.6f);
  PatchSet set;
  set.patches = {a, b};
  set.placements = {{0, 0}, {0, 0}};
  set.source_width = 4;
  set.source_height = 4;
  set.source_transform = gt;
  set.spec = {4, 0.0};
  const RasterGrid m = mosaic(set);
  for (float v : m.values()) EXPECT_FLOAT_EQ(v, 0.4f);
}

TEST(Patching, MosaicMatchesSumCountOracle) {
  std::mt19937_64 rng(21);
  const std::int64_t w = 40, h = 30, size = 8;
  PatchSet set;
  set.source_width = w;
  set.source_height = h;
  set.source_transform = {0, 0, 1, 1, "EPSG:32634"};
  set.spec = {size, 0.0};
  std::vector<double> sum(static_cast<std::size_t>(w * h), 0.0), count(sum.size(), 0.0);
  // a full tiling first so every pixel is covered, then random extras
  for (std::int64_t r = 0; r < h; r += size) {
    for (std::int64_t c = 0; c < w; c += size) set.placements.push_back({std::min(r, h - size), std::min(c, w - size)});
  }
  for (int k = 0; k < 30; ++k) {
    set.placements.push_back({static_cast<std::int64_t>(rng() % (h - size + 1)),
                              static_cast<std::int64_t>(rng() % (w - size + 1))});
  }
  for (const Placement& p : set.placements) {
    std::mt19937_64 local(rng());
    RasterGrid patch = testing::random_raster(size, size, 1, local, RasterKind::kProbabilityMap);
    for (std::int64_t r = 0; r < size; ++r) {
      for (std::int64_t c = 0; c < size; ++c) {
        const std::size_t k = static_cast<std::size_t>((p.row + r) * w + p.col + c);
        sum[k] += patch.at(0, r, c);
        count[k] += 1.0;
      }
    }
    set.patches.push_back(std::move(patch));
  }
  const RasterGrid m = mosaic(set);
  for (std::size_t k = 0; k < sum.size(); ++k) {
    EXPECT_EQ(m.values()[k], static_cast<float>(sum[k] / count[k]));
  }
}

TEST(Patching, Deterministic) {
  std::mt19937_64 rng(22);
  const RasterGrid r = testing::random_raster(300, 200, 1, rng);
  const PatchSet a = patchify(r, {64, 0.2});
  const PatchSet b = patchify(r, {64, 0.2});
  EXPECT_EQ(a.placements, b.placements);
}

TEST(Patching, DirectoryRoundTrip) {
  TempDir dir("patches");
  std::mt19937_64 rng(5);
  std::vector<float> v(90 * 70);
  for (float& x : v) x = static_cast<float>(rng() % 2);
  const RasterGrid mask(90, 70, 1, {10, 20, 1.5, 1.5, "EPSG:32634"}, RasterKind::kBinaryMask, v, std::nullopt,
                        SampleType::kUInt8);
  const PatchSet set = patchify(mask, {32, 0.2});
  write_patchset(set, dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "index.json"));
  const PatchSet back = read_patchset(dir.path());
  ASSERT_EQ(back.size(), set.size());
  EXPECT_EQ(back.placements, set.placements);
  EXPECT_EQ(back.source_width, 90);
  EXPECT_EQ(back.source_transform, set.source_transform);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_TRUE(back.patches[i] == set.patches[i]);
  }
  EXPECT_TRUE(mosaic(back) == mask);
}

TEST(Patching, EmptyMosaicIsError) {
  PatchSet empty;
  try {
    mosaic(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySet);
  }
}

PolygonSet square_aoi(double side) { return {"EPSG:32634", {box_polygon({0, 0, side, side})}}; }

TEST(BlockSplit, GridCoversAoi) {
  const BlockGrid g = build_block_grid(square_aoi(1000), 100);
  EXPECT_EQ(g.cols, 10);
  EXPECT_EQ(g.rows, 10);
  EXPECT_EQ(g.blocks.size(), 100u);
  EXPECT_EQ(g.block_at({50, 50}), 0);
  EXPECT_EQ(g.block_at({150, 50}), 1);
  EXPECT_FALSE(g.block_at({-1, 50}).has_value());
}

TEST(BlockSplit, BoundaryUsesHalfOpenIntervals) {
  const BlockGrid g = build_block_grid(square_aoi(300), 100);
  EXPECT_EQ(g.block_at({100.0, 0.0}), 1);
  EXPECT_EQ(g.block_at({99.999, 0.0}), 0);
  EXPECT_EQ(g.block_at({0.0, 100.0}), 3);
  EXPECT_FALSE(g.block_at({300.0, 0.0}).has_value());
}

TEST(BlockSplit, BlockAtMatchesBruteForceScan) {
  Polygon l;
  l.outer = {{0, 0}, {500, 0}, {500, 200}, {200, 200}, {200, 500}, {0, 500}, {0, 0}};
  const BlockGrid g = build_block_grid({"EPSG:32634", {l}}, 70);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 520.0);
  for (int k = 0; k < 2000; ++k) {
    const Point p{u(rng), u(rng)};
    std::optional<std::int64_t> expect;
    for (const Block& b : g.blocks) {
      if (p.x >= b.box.min_x && p.x < b.box.max_x && p.y >= b.box.min_y && p.y < b.box.max_y) expect = b.id;
    }
    EXPECT_EQ(g.block_at(p), expect);
  }
}

TEST(BlockSplit, BlocksOutsideAoiAreDropped) {
  // L-shaped AOI: three of four 100 m blocks
  Polygon l;
  l.outer = {{0, 0}, {200, 0}, {200, 100}, {100, 100}, {100, 200}, {0, 200}, {0, 0}};
  const BlockGrid g = build_block_grid({"EPSG:32634", {l}}, 100);
  EXPECT_EQ(g.blocks.size(), 3u);
  EXPECT_FALSE(g.block_at({150, 150}).has_value());
}

TEST(BlockSplit, ApportionIsExactForHundred) {
  EXPECT_EQ(apportion(100, kDefaultSplitFractions), (std::array<std::size_t, 3>{70, 20, 10}));
  EXPECT_EQ(apportion(10, kDefaultSplitFractions), (std::array<std::size_t, 3>{7, 2, 1}));
  for (std::size_t n = 0; n < 50; ++n) {
    const auto c = apportion(n, kDefaultSplitFractions);
    EXPECT_EQ(c[0] + c[1] + c[2], n);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_LE(std::abs(static_cast<double>(c[k]) - kDefaultSplitFractions[k] * n), 1.0);
    }
  }
}

TEST(BlockSplit, BoundedDrawIsInRange) {
  std::mt19937_64 rng(9);
  std::array<int, 7> hist{};
  for (int i = 0; i < 7000; ++i) {
    const auto x = bounded_draw(rng, 7);
    ASSERT_LT(x, 7u);
    ++hist[x];
  }
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(BlockSplit, SeedDeterminism) {
  const BlockGrid g = build_block_grid(square_aoi(1000), 100);
  const auto a = assign_splits(g, kDefaultSplitFractions, 42);
  const auto b = assign_splits(g, kDefaultSplitFractions, 42);
  const auto c = assign_splits(g, kDefaultSplitFractions, 43);
  EXPECT_EQ(a.block_to_split, b.block_to_split);
  EXPECT_NE(a.block_to_split, c.block_to_split);
  EXPECT_EQ(a.block_counts(), (std::array<std::size_t, 3>{70, 20, 10}));
}

TEST(BlockSplit, BadFractions) {
  const BlockGrid g = build_block_grid(square_aoi(100), 100);
  for (SplitFractions f : {SplitFractions{0.5, 0.2, 0.1}, SplitFractions{1.2, -0.1, -0.1}}) {
    try {
      assign_splits(g, f, 0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadFractions);
    }
  }
}

TEST(BlockSplit, EmptyAoi) {
  try {
    build_block_grid({"EPSG:32634", {}}, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAoi);
  }
}

TEST(BlockSplit, PatchesInheritTheirBlock) {
  const GeoTransform gt{0, 1000, 1, 1, "EPSG:32634"};
  const RasterGrid r = RasterGrid::filled(1000, 1000, 1, gt, RasterKind::kImage, 1.0f);
  const PatchSet set = patchify(r, {50, 0.0});
  const BlockGrid g = build_block_grid(square_aoi(1000), 100);
  const auto a = assign_patches(set, assign_splits(g, kDefaultSplitFractions, 5));
  EXPECT_TRUE(a.excluded_patches.empty());
  std::map<std::int64_t, std::set<Split>> per_block;
  for (const auto& [i, s] : a.patch_to_split) {
    const Placement& p = set.placements[i];
    const auto block = g.block_at({p.col + 25.0, 1000.0 - p.row - 25.0});
    ASSERT_TRUE(block.has_value());
    per_block[*block].insert(s);
    EXPECT_EQ(s, a.block_to_split.at(*block));
  }
  for (const auto& [b, splits] : per_block) EXPECT_EQ(splits.size(), 1u);
}

TEST(BlockSplit, SplitFileRoundTrip) {
  TempDir dir("split");
  const GeoTransform gt{0, 1000, 1, 1, "EPSG:32634"};
  const RasterGrid r = RasterGrid::filled(1000, 1000, 1, gt, RasterKind::kImage, 1.0f);
  const BlockGrid g = build_block_grid(square_aoi(1000), 200, "scene_a");
  const auto a = assign_patches(patchify(r, {100, 0.0}), assign_splits(g, kDefaultSplitFractions, 8));
  write_split_file({a}, dir.path() / "split.json");
  const auto back = read_split_file(dir.path() / "split.json");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].block_to_split, a.block_to_split);
  EXPECT_EQ(back[0].patch_to_split, a.patch_to_split);
  EXPECT_EQ(back[0].seed, 8u);
  EXPECT_EQ(back[0].grid.aoi_id, "scene_a");
}

TEST(BlockSplit, BalanceCountsBurnedPixels) {
  const GeoTransform gt{0, 100, 1, 1, "EPSG:32634"};
  std::vector<float> v(100 * 100, 0.0f);
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 100; ++c) v[r * 100 + c] = 1.0f;
  const RasterGrid ba(100, 100, 1, gt, RasterKind::kBinaryMask, v);
  const PatchSet set = patchify(ba, {50, 0.0});
  const BlockGrid g = build_block_grid(square_aoi(100), 50);
  const auto a = assign_patches(set, assign_splits(g, {0.5, 0.25, 0.25}, 1));
  const SplitBalance bal = split_balance(a, set);
  EXPECT_EQ(bal.pixels[0] + bal.pixels[1] + bal.pixels[2], 10000);
  EXPECT_EQ(bal.burned[0] + bal.burned[1] + bal.burned[2], 5000);
}

}  // namespace
}  // namespace burnseg
