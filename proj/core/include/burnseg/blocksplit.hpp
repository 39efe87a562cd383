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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "burnseg/geometry.hpp"
#include "burnseg/patching.hpp"

namespace burnseg {

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct Block {
  std::int64_t id = 0;
  std::int64_t col = 0;  // index along x from the anchor
  std::int64_t row = 0;  // index along y from the anchor
  Box box;
};

/// Square blocks anchored at the AOI bounding-box minimum corner. Block
/// (col, row) covers the half-open box [min_x + col*s, min_x + (col+1)*s) x
/// [min_y + row*s, min_y + (row+1)*s); id = row * cols + col. Blocks that
/// do not intersect the AOI with positive area are dropped.
struct BlockGrid {
  std::string aoi_id;
  double block_size = 2000.0;
  double anchor_x = 0.0;
  double anchor_y = 0.0;
  std::int64_t cols = 0;
  std::int64_t rows = 0;
  std::vector<Block> blocks;

  /// Block whose half-open box contains p, if it was kept.
  std::optional<std::int64_t> block_at(Point p) const;
};

BlockGrid build_block_grid(const PolygonSet& aoi, double block_size, std::string aoi_id = "aoi");

using SplitFractions = std::array<double, 3>;

/// Default (train, val, test) block fractions.
inline constexpr SplitFractions kDefaultSplitFractions = {0.7, 0.2, 0.1};

struct SplitAssignment {
  SplitFractions fractions = kDefaultSplitFractions;
  std::uint64_t seed = 0;
  BlockGrid grid;
  std::map<std::int64_t, Split> block_to_split;
  std::map<std::size_t, Split> patch_to_split;
  /// Patches whose center falls in no kept block.
  std::vector<std::size_t> excluded_patches;

  std::array<std::size_t, 3> block_counts() const;
};

/// Largest-remainder apportionment of n items; ties go to the earlier split.
std::array<std::size_t, 3> apportion(std::size_t n, const SplitFractions& fractions);

/// Uniform integer in [0, bound) from a 64-bit engine by rejection; the
/// result depends only on the engine's output sequence, so it is portable.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound);

/// Shuffles block ids (ascending) with std::mt19937_64(seed) and a
/// Fisher-Yates pass, then hands out TRAIN, VAL, TEST in apportioned counts.
SplitAssignment assign_splits(const BlockGrid& grid, const SplitFractions& fractions, std::uint64_t seed);

/// Maps each patch by the block containing its window center.
SplitAssignment assign_patches(const PatchSet& patches, const SplitAssignment& assignment);

struct SplitBalance {
  std::array<std::int64_t, 3> pixels{};
  std::array<std::int64_t, 3> burned{};

  double burned_fraction(Split split) const;
};

/// Burned-pixel share per split over the valid (non-padded, non-nodata)
/// pixels of a BA patch set.
SplitBalance split_balance(const SplitAssignment& assignment, const PatchSet& ba_patches);

void write_split_file(const std::vector<SplitAssignment>& assignments, const std::filesystem::path& path);
std::vector<SplitAssignment> read_split_file(const std::filesystem::path& path);

}  // namespace burnseg
