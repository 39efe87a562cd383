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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burnseg/geometry.hpp"

namespace burnseg {

/// North-up affine placement of a pixel grid. `origin_y` is the top edge;
/// row r spans [origin_y - (r+1)*pixel_size_y, origin_y - r*pixel_size_y].
/// Both pixel sizes are positive; the negative y step only appears when the
/// transform is written to disk.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double pixel_size_x = 1.0;
  double pixel_size_y = 1.0;
  std::string crs_id;

  void validate() const;

  double center_x(double col) const { return origin_x + (col + 0.5) * pixel_size_x; }
  double center_y(double row) const { return origin_y - (row + 0.5) * pixel_size_y; }
  Box extent(std::int64_t width, std::int64_t height) const;
  /// Transform of the sub-window starting at (row, col).
  GeoTransform shifted(std::int64_t row, std::int64_t col) const;

  bool operator==(const GeoTransform&) const = default;
};

enum class RasterKind { kImage, kBinaryMask, kCategoryMap, kProbabilityMap };

std::string_view raster_kind_name(RasterKind kind);
RasterKind parse_raster_kind(std::string_view name);

/// On-disk sample type. Values are held as float in memory; all three types
/// convert without loss.
enum class SampleType { kUInt8, kUInt16, kFloat32 };

inline constexpr double kMaskNodata = 255.0;

/// Georeferenced band-major pixel grid. Immutable once constructed; every
/// operation returns a new grid.
class RasterGrid {
 public:
  RasterGrid(std::int64_t width, std::int64_t height, std::int64_t bands, GeoTransform transform,
             RasterKind kind, std::vector<float> values, std::optional<double> nodata = std::nullopt,
             std::optional<SampleType> sample_type = std::nullopt);

  /// Grid filled with `fill`.
  static RasterGrid filled(std::int64_t width, std::int64_t height, std::int64_t bands,
                           GeoTransform transform, RasterKind kind, float fill,
                           std::optional<double> nodata = std::nullopt);

  std::int64_t width() const { return width_; }
  std::int64_t height() const { return height_; }
  std::int64_t bands() const { return bands_; }
  std::int64_t pixel_count() const { return width_ * height_; }
  const GeoTransform& transform() const { return transform_; }
  RasterKind kind() const { return kind_; }
  const std::optional<double>& nodata() const { return nodata_; }
  SampleType sample_type() const { return sample_type_; }
  std::span<const float> values() const { return values_; }
  std::span<const float> band(std::int64_t b) const;
  Box extent() const { return transform_.extent(width_, height_); }

  float at(std::int64_t band, std::int64_t row, std::int64_t col) const {
    return values_[static_cast<std::size_t>((band * height_ + row) * width_ + col)];
  }
  bool is_nodata(float v) const;
  /// True when every band at (row, col) holds the nodata value.
  bool pixel_is_nodata(std::int64_t row, std::int64_t col) const;

  bool same_geometry(const RasterGrid& other) const;

  bool operator==(const RasterGrid& other) const;

 private:
  void validate() const;

  std::int64_t width_;
  std::int64_t height_;
  std::int64_t bands_;
  GeoTransform transform_;
  RasterKind kind_;
  std::vector<float> values_;
  std::optional<double> nodata_;
  SampleType sample_type_;
};

/// WorldCover-style code table plus the extra cloud category.
struct LandCoverScheme {
  std::map<int, int> code_to_index;
  int cloud_index = 11;
  int num_classes = 12;

  static LandCoverScheme world_cover();
  void validate() const;
};

struct ClipOptions {
  /// Nodata written outside the AOI for IMAGE rasters without their own nodata.
  double image_nodata = 0.0;
};

/// Crops to the bounding box of aoi ∩ extent and writes nodata to pixels
/// whose centers fall outside the AOI.
RasterGrid clip_to_aoi(const RasterGrid& raster, const PolygonSet& aoi,
                       const ClipOptions& options = {});

/// Pixel = 1 iff its center lies inside any polygon.
RasterGrid binarize_delineation(const PolygonSet& polygons, const RasterGrid& template_grid);

/// Pixel-center rasterization onto a bare grid geometry.
std::vector<std::uint8_t> rasterize_centers(const PolygonSet& polygons, const GeoTransform& transform,
                                            std::int64_t width, std::int64_t height);

/// ba AND NOT cloud.
RasterGrid subtract_cloud(const RasterGrid& ba_mask, const RasterGrid& cloud_mask);

/// Nearest-center resampling; equidistant ties go to the smaller source index.
RasterGrid resample_nearest(const RasterGrid& source, const GeoTransform& target,
                            std::int64_t target_width, std::int64_t target_height);

/// Remaps LC codes to contiguous indices and overwrites cloud pixels with the
/// cloud class.
RasterGrid apply_lc_scheme(const RasterGrid& lc, const RasterGrid& cloud,
                           const LandCoverScheme& scheme);

}  // namespace burnseg
