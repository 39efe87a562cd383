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

#include "burnseg/patching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "burnseg/error.hpp"
#include "burnseg/geotiff.hpp"
#include "json.hpp"

namespace burnseg {

void PatchSpec::validate() const {
  require(patch_size >= 1, ErrorCode::kInvalidArgument, "patch_size must be >= 1");
  require(overlap_fraction >= 0.0 && overlap_fraction < 1.0, ErrorCode::kInvalidArgument,
          "overlap_fraction must be in [0, 1)");
}

std::int64_t PatchSpec::stride() const {
  const auto s = static_cast<std::int64_t>(std::floor(static_cast<double>(patch_size) * (1.0 - overlap_fraction)));
  return std::max<std::int64_t>(s, 1);
}

std::int64_t PatchSet::valid_rows(std::size_t i) const {
  return std::min(spec.patch_size, source_height - placements[i].row);
}

std::int64_t PatchSet::valid_cols(std::size_t i) const {
  return std::min(spec.patch_size, source_width - placements[i].col);
}

void PatchSet::validate() const {
  spec.validate();
  require(patches.size() == placements.size(), ErrorCode::kInvalidArgument,
          "patch and placement counts differ");
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const Placement& p = placements[i];
    require(p.row >= 0 && p.col >= 0 && p.row < source_height && p.col < source_width,
            ErrorCode::kInvalidArgument, "placement outside the source");
    require(patches[i].width() == spec.patch_size && patches[i].height() == spec.patch_size,
            ErrorCode::kInvalidArgument, "patch size differs from the spec");
  }
}

std::vector<std::int64_t> window_offsets(std::int64_t extent, const PatchSpec& spec) {
  const std::int64_t size = spec.patch_size;
  if (extent <= size) {
    return {0};
  }
  const std::int64_t stride = spec.stride();
  std::vector<std::int64_t> offsets;
  for (std::int64_t offset = 0; offset < extent; offset += stride) {
    const std::int64_t snapped = std::min(offset, extent - size);
    if (offsets.empty() || offsets.back() != snapped) {
      offsets.push_back(snapped);
    }
    if (snapped == extent - size) {
      break;
    }
  }
  return offsets;
}

PatchSet patchify(const RasterGrid& raster, const PatchSpec& spec) {
  spec.validate();
  PatchSet set;
  set.source_width = raster.width();
  set.source_height = raster.height();
  set.source_transform = raster.transform();
  set.spec = spec;

  const std::int64_t size = spec.patch_size;
  const std::int64_t bands = raster.bands();
  const auto rows = window_offsets(raster.height(), spec);
  const auto cols = window_offsets(raster.width(), spec);
  const std::optional<double> nodata = raster.nodata();

  for (std::int64_t r0 : rows) {
    for (std::int64_t c0 : cols) {
      std::vector<float> values(static_cast<std::size_t>(bands * size * size), spec.pad_value);
      const std::int64_t h = std::min(size, raster.height() - r0);
      const std::int64_t w = std::min(size, raster.width() - c0);
      for (std::int64_t b = 0; b < bands; ++b) {
        const auto band = raster.band(b);
        for (std::int64_t r = 0; r < h; ++r) {
          const float* src = band.data() + (r0 + r) * raster.width() + c0;
          std::copy(src, src + w, values.begin() + (b * size + r) * size);
        }
      }
      set.patches.emplace_back(size, size, bands, raster.transform().shifted(r0, c0), raster.kind(),
                               std::move(values), nodata, raster.sample_type());
      set.placements.push_back({r0, c0});
    }
  }
  return set;
}

RasterGrid mosaic(const PatchSet& predictions, BlendMode blend) {
  require(!predictions.patches.empty(), ErrorCode::kEmptySet, "no patches to mosaic");
  predictions.validate();
  const RasterGrid& first = predictions.patches.front();
  const std::int64_t bands = first.bands();
  const std::int64_t width = predictions.source_width;
  const std::int64_t height = predictions.source_height;
  const std::int64_t size = predictions.spec.patch_size;

  // Sums of at most a handful of floats are exact in double, so a pixel whose
  // covering patches agree reproduces that value bit-exactly.
  std::vector<double> sum(static_cast<std::size_t>(bands * width * height), 0.0);
  std::vector<double> weight(sum.size(), 0.0);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const RasterGrid& patch = predictions.patches[i];
    require(patch.bands() == bands, ErrorCode::kInvalidArgument, "patches differ in band count");
    const Placement& p = predictions.placements[i];
    const std::int64_t h = predictions.valid_rows(i);
    const std::int64_t w = predictions.valid_cols(i);
    for (std::int64_t b = 0; b < bands; ++b) {
      for (std::int64_t r = 0; r < h; ++r) {
        for (std::int64_t c = 0; c < w; ++c) {
          const float v = patch.at(b, r, c);
          if (patch.is_nodata(v)) {
            continue;
          }
          double wgt = 1.0;
          if (blend == BlendMode::kFeather) {
            wgt = static_cast<double>(std::min({r + 1, size - r, c + 1, size - c}));
          }
          const std::size_t k = static_cast<std::size_t>((b * height + p.row + r) * width + p.col + c);
          sum[k] += wgt * static_cast<double>(v);
          weight[k] += wgt;
        }
      }
    }
  }

  std::vector<float> values(sum.size());
  bool any_gap = false;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (weight[k] > 0.0) {
      values[k] = static_cast<float>(sum[k] / weight[k]);
    } else {
      values[k] = static_cast<float>(kMaskNodata);
      any_gap = true;
    }
  }
  std::optional<double> nodata = first.nodata();
  if (any_gap && !nodata) {
    nodata = kMaskNodata;
  }
  return RasterGrid(width, height, bands, predictions.source_transform, first.kind(), std::move(values),
                    nodata, first.sample_type());
}

PatchSet with_patches(const PatchSet& layout, std::vector<RasterGrid> patches) {
  require(patches.size() == layout.placements.size(), ErrorCode::kInvalidArgument,
          "patch count does not match the layout");
  PatchSet out;
  out.patches = std::move(patches);
  out.placements = layout.placements;
  out.source_width = layout.source_width;
  out.source_height = layout.source_height;
  out.source_transform = layout.source_transform;
  out.spec = layout.spec;
  return out;
}

namespace {

using nlohmann::json;

json transform_to_json(const GeoTransform& gt) {
  return {{"origin_x", gt.origin_x},
          {"origin_y", gt.origin_y},
          {"pixel_size_x", gt.pixel_size_x},
          {"pixel_size_y", gt.pixel_size_y},
          {"crs_id", gt.crs_id}};
}

GeoTransform transform_from_json(const json& j) {
  GeoTransform gt;
  gt.origin_x = j.at("origin_x").get<double>();
  gt.origin_y = j.at("origin_y").get<double>();
  gt.pixel_size_x = j.at("pixel_size_x").get<double>();
  gt.pixel_size_y = j.at("pixel_size_y").get<double>();
  gt.crs_id = j.at("crs_id").get<std::string>();
  return gt;
}

std::string patch_file_name(std::size_t i) {
  char name[32];
  std::snprintf(name, sizeof(name), "patch_%05zu.tif", i);
  return name;
}

}  // namespace

void write_patchset(const PatchSet& set, const std::filesystem::path& directory) {
  set.validate();
  std::filesystem::create_directories(directory);
  json entries = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::string file = patch_file_name(i);
    write_raster(set.patches[i], directory / file);
    entries.push_back({{"file", file}, {"row", set.placements[i].row}, {"col", set.placements[i].col}});
  }
  json index = {{"format", "burnseg-patchset"},
                {"version", 1},
                {"source_width", set.source_width},
                {"source_height", set.source_height},
                {"source_transform", transform_to_json(set.source_transform)},
                {"spec",
                 {{"patch_size", set.spec.patch_size},
                  {"overlap_fraction", set.spec.overlap_fraction},
                  {"pad_value", set.spec.pad_value}}},
                {"patches", entries}};
  std::ofstream out(directory / "index.json");
  require(out.good(), ErrorCode::kIoError, "cannot write index in '" + directory.string() + "'");
  out << index.dump(1) << "\n";
}

PatchSet read_patchset(const std::filesystem::path& directory) {
  const auto index_path = directory / "index.json";
  std::ifstream in(index_path);
  require(in.good(), ErrorCode::kIoError, "no patch index at '" + index_path.string() + "'");
  PatchSet set;
  try {
    const json index = json::parse(in);
    require(index.at("format") == "burnseg-patchset" && index.at("version") == 1, ErrorCode::kUnsupportedFormat,
            "unknown patch index format in '" + index_path.string() + "'");
    set.source_width = index.at("source_width").get<std::int64_t>();
    set.source_height = index.at("source_height").get<std::int64_t>();
    set.source_transform = transform_from_json(index.at("source_transform"));
    const json& spec = index.at("spec");
    set.spec.patch_size = spec.at("patch_size").get<std::int64_t>();
    set.spec.overlap_fraction = spec.at("overlap_fraction").get<double>();
    set.spec.pad_value = spec.at("pad_value").get<float>();
    for (const json& entry : index.at("patches")) {
      set.patches.push_back(read_raster(directory / entry.at("file").get<std::string>()));
      set.placements.push_back({entry.at("row").get<std::int64_t>(), entry.at("col").get<std::int64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + index_path.string() + "': " + e.what());
  }
  set.validate();
  return set;
}

}  // namespace burnseg
