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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "burnseg/raster.hpp"

namespace burnseg {

struct PatchSpec {
  std::int64_t patch_size = 512;
  /// 0.0 for training scenes, 0.2 for prediction scenes.
  double overlap_fraction = 0.0;
  float pad_value = 0.0f;

  void validate() const;
  /// floor(patch_size * (1 - overlap_fraction)), at least 1.
  std::int64_t stride() const;
};

struct Placement {
  std::int64_t row = 0;
  std::int64_t col = 0;

  bool operator==(const Placement&) const = default;
  auto operator<=>(const Placement&) const = default;
};

struct PatchSet {
  std::vector<RasterGrid> patches;
  std::vector<Placement> placements;
  std::int64_t source_width = 0;
  std::int64_t source_height = 0;
  GeoTransform source_transform;
  PatchSpec spec;

  std::size_t size() const { return patches.size(); }
  /// Rows/cols of patch i that lie inside the source (the rest is padding).
  std::int64_t valid_rows(std::size_t i) const;
  std::int64_t valid_cols(std::size_t i) const;
  void validate() const;
};

/// Window offsets along one axis of length `extent`: multiples of the stride,
/// the last window snapped back so that it ends on the border. A single
/// offset 0 when extent <= patch_size.
std::vector<std::int64_t> window_offsets(std::int64_t extent, const PatchSpec& spec);

PatchSet patchify(const RasterGrid& raster, const PatchSpec& spec);

enum class BlendMode {
  kMean,     // unweighted mean of covering patches
  kFeather,  // pyramid weights that fall off towards patch borders
};

/// Reassembles per-patch maps into the source grid. Padding and nodata
/// samples are excluded from the average; pixels covered by no patch are
/// written as nodata (255).
RasterGrid mosaic(const PatchSet& predictions, BlendMode blend = BlendMode::kMean);

/// Same placements and spec, new per-patch content (e.g. model outputs).
PatchSet with_patches(const PatchSet& layout, std::vector<RasterGrid> patches);

/// Directory of patch_NNNNN.tif files plus index.json.
void write_patchset(const PatchSet& set, const std::filesystem::path& directory);
PatchSet read_patchset(const std::filesystem::path& directory);

}  // namespace burnseg
