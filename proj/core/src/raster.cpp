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

#include "burnseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "burnseg/error.hpp"

namespace burnseg {

namespace {

constexpr double kEdgeTolerance = 1e-9;

SampleType default_sample_type(RasterKind kind) {
  switch (kind) {
    case RasterKind::kBinaryMask:
    case RasterKind::kCategoryMap:
      return SampleType::kUInt8;
    case RasterKind::kImage:
    case RasterKind::kProbabilityMap:
      return SampleType::kFloat32;
  }
  return SampleType::kFloat32;
}

bool is_integral(float v) { return std::isfinite(v) && std::floor(v) == v; }

void require_same_crs(const std::string& a, const std::string& b) {
  require(a == b, ErrorCode::kCrsMismatch, "'" + a + "' vs '" + b + "'");
}

}  // namespace

void GeoTransform::validate() const {
  require(pixel_size_x > 0.0 && pixel_size_y > 0.0, ErrorCode::kInvalidArgument,
          "pixel sizes must be positive");
  require(!crs_id.empty(), ErrorCode::kInvalidArgument, "crs_id must be non-empty");
}

Box GeoTransform::extent(std::int64_t width, std::int64_t height) const {
  return Box{origin_x, origin_y - static_cast<double>(height) * pixel_size_y,
             origin_x + static_cast<double>(width) * pixel_size_x, origin_y};
}

GeoTransform GeoTransform::shifted(std::int64_t row, std::int64_t col) const {
  GeoTransform out = *this;
  out.origin_x = origin_x + static_cast<double>(col) * pixel_size_x;
  out.origin_y = origin_y - static_cast<double>(row) * pixel_size_y;
  return out;
}

std::string_view raster_kind_name(RasterKind kind) {
  switch (kind) {
    case RasterKind::kImage: return "IMAGE";
    case RasterKind::kBinaryMask: return "BINARY_MASK";
    case RasterKind::kCategoryMap: return "CATEGORY_MAP";
    case RasterKind::kProbabilityMap: return "PROBABILITY_MAP";
  }
  return "IMAGE";
}

RasterKind parse_raster_kind(std::string_view name) {
  for (RasterKind kind : {RasterKind::kImage, RasterKind::kBinaryMask, RasterKind::kCategoryMap,
                          RasterKind::kProbabilityMap}) {
    if (raster_kind_name(kind) == name) {
      return kind;
    }
  }
  fail(ErrorCode::kUnsupportedFormat, "unknown raster kind '" + std::string(name) + "'");
}

RasterGrid::RasterGrid(std::int64_t width, std::int64_t height, std::int64_t bands,
                       GeoTransform transform, RasterKind kind, std::vector<float> values,
                       std::optional<double> nodata, std::optional<SampleType> sample_type)
    : width_(width),
      height_(height),
      bands_(bands),
      transform_(std::move(transform)),
      kind_(kind),
      values_(std::move(values)),
      nodata_(nodata),
      sample_type_(sample_type.value_or(default_sample_type(kind))) {
  validate();
}

RasterGrid RasterGrid::filled(std::int64_t width, std::int64_t height, std::int64_t bands,
                              GeoTransform transform, RasterKind kind, float fill,
                              std::optional<double> nodata) {
  std::vector<float> values(static_cast<std::size_t>(width * height * bands), fill);
  return RasterGrid(width, height, bands, std::move(transform), kind, std::move(values), nodata);
}

void RasterGrid::validate() const {
  require(width_ >= 1 && height_ >= 1, ErrorCode::kInvalidArgument, "raster must be non-empty");
  require(bands_ >= 1, ErrorCode::kInvalidArgument, "raster needs at least one band");
  transform_.validate();
  require(values_.size() == static_cast<std::size_t>(bands_ * height_ * width_),
          ErrorCode::kInvalidArgument, "values size does not match bands x height x width");

  for (float v : values_) {
    if (is_nodata(v)) {
      continue;
    }
    switch (kind_) {
      case RasterKind::kBinaryMask:
        require(v == 0.0f || v == 1.0f, ErrorCode::kInvalidArgument,
                "binary mask value outside {0,1}");
        break;
      case RasterKind::kProbabilityMap:
        require(v >= 0.0f && v <= 1.0f, ErrorCode::kInvalidArgument,
                "probability outside [0,1]");
        break;
      case RasterKind::kCategoryMap:
        // Both raw source codes and scheme indices are categories; 255 is
        // reserved for nodata.
        require(is_integral(v) && v >= 0.0f && v < 255.0f, ErrorCode::kInvalidArgument,
                "category value is not a class index");
        break;
      case RasterKind::kImage:
        break;
    }
    switch (sample_type_) {
      case SampleType::kUInt8:
        require(is_integral(v) && v >= 0.0f && v <= 255.0f, ErrorCode::kInvalidArgument,
                "value does not fit uint8");
        break;
      case SampleType::kUInt16:
        require(is_integral(v) && v >= 0.0f && v <= 65535.0f, ErrorCode::kInvalidArgument,
                "value does not fit uint16");
        break;
      case SampleType::kFloat32:
        break;
    }
  }
}

std::span<const float> RasterGrid::band(std::int64_t b) const {
  return std::span<const float>(values_).subspan(static_cast<std::size_t>(b * height_ * width_),
                                                 static_cast<std::size_t>(height_ * width_));
}

bool RasterGrid::is_nodata(float v) const {
  if (!nodata_) {
    return false;
  }
  if (std::isnan(*nodata_)) {
    return std::isnan(v);
  }
  return static_cast<double>(v) == *nodata_;
}

bool RasterGrid::pixel_is_nodata(std::int64_t row, std::int64_t col) const {
  if (!nodata_) {
    return false;
  }
  for (std::int64_t b = 0; b < bands_; ++b) {
    if (!is_nodata(at(b, row, col))) {
      return false;
    }
  }
  return true;
}

bool RasterGrid::same_geometry(const RasterGrid& other) const {
  return width_ == other.width_ && height_ == other.height_ && transform_ == other.transform_;
}

bool RasterGrid::operator==(const RasterGrid& other) const {
  if (!same_geometry(other) || bands_ != other.bands_ || kind_ != other.kind_ ||
      sample_type_ != other.sample_type_) {
    return false;
  }
  if (nodata_.has_value() != other.nodata_.has_value()) {
    return false;
  }
  if (nodata_ && std::memcmp(&*nodata_, &*other.nodata_, sizeof(double)) != 0) {
    return false;
  }
  return std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(float)) == 0;
}

LandCoverScheme LandCoverScheme::world_cover() {
  LandCoverScheme scheme;
  const int codes[] = {10, 20, 30, 40, 50, 60, 70, 80, 90, 95, 100};
  for (int i = 0; i < 11; ++i) {
    scheme.code_to_index[codes[i]] = i;
  }
  scheme.cloud_index = 11;
  scheme.num_classes = 12;
  return scheme;
}

void LandCoverScheme::validate() const {
  std::set<int> indices;
  for (const auto& [code, index] : code_to_index) {
    indices.insert(index);
  }
  const int n = static_cast<int>(code_to_index.size());
  require(static_cast<int>(indices.size()) == n && (n == 0 || (*indices.begin() == 0 &&
                                                               *indices.rbegin() == n - 1)),
          ErrorCode::kBadConfig, "land-cover codes must map bijectively onto 0..n-1");
  require(cloud_index == num_classes - 1 && num_classes == n + 1, ErrorCode::kBadConfig,
          "cloud index must be the last class");
}

std::vector<std::uint8_t> rasterize_centers(const PolygonSet& polygons, const GeoTransform& transform,
                                            std::int64_t width, std::int64_t height) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width * height), 0);
  std::vector<std::uint8_t> poly_row(static_cast<std::size_t>(width));
  std::vector<std::uint8_t> ring_row(static_cast<std::size_t>(width));
  std::vector<double> crossings;

  // Fills `out` with the even-odd parity of `ring` at every column center.
  auto ring_parity = [&](const Ring& ring, double y, std::vector<std::uint8_t>& out) {
    crossings.clear();
    ring_crossings(ring, y, crossings);
    std::sort(crossings.begin(), crossings.end());
    // A center x is inside iff an odd number of crossings lie strictly to
    // its right.
    std::size_t le = 0;
    for (std::int64_t c = 0; c < width; ++c) {
      const double x = transform.center_x(static_cast<double>(c));
      while (le < crossings.size() && crossings[le] <= x) {
        ++le;
      }
      out[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>((crossings.size() - le) & 1U);
    }
  };

  for (const Polygon& polygon : polygons.polygons) {
    if (polygon.outer.size() < 3) {
      continue;
    }
    const Box box = bounding_box(polygon);
    for (std::int64_t r = 0; r < height; ++r) {
      const double y = transform.center_y(static_cast<double>(r));
      if (y < box.min_y || y > box.max_y) {
        continue;
      }
      ring_parity(polygon.outer, y, poly_row);
      for (const Ring& hole : polygon.holes) {
        ring_parity(hole, y, ring_row);
        for (std::int64_t c = 0; c < width; ++c) {
          poly_row[static_cast<std::size_t>(c)] &= static_cast<std::uint8_t>(!ring_row[static_cast<std::size_t>(c)]);
        }
      }
      std::uint8_t* dst = mask.data() + r * width;
      for (std::int64_t c = 0; c < width; ++c) {
        dst[c] |= poly_row[static_cast<std::size_t>(c)];
      }
    }
  }
  return mask;
}

RasterGrid clip_to_aoi(const RasterGrid& raster, const PolygonSet& aoi, const ClipOptions& options) {
  const GeoTransform& gt = raster.transform();
  require_same_crs(aoi.crs_id, gt.crs_id);
  require(!aoi.empty(), ErrorCode::kNoOverlap, "AOI is empty");

  const auto overlap = intersect(bounding_box(aoi), raster.extent());
  require(overlap.has_value(), ErrorCode::kNoOverlap, "AOI does not intersect the raster extent");

  auto lo = [](double v) { return static_cast<std::int64_t>(std::floor(v + kEdgeTolerance)); };
  auto hi = [](double v) { return static_cast<std::int64_t>(std::ceil(v - kEdgeTolerance)); };
  const std::int64_t col0 = std::clamp<std::int64_t>(lo((overlap->min_x - gt.origin_x) / gt.pixel_size_x), 0, raster.width());
  const std::int64_t col1 = std::clamp<std::int64_t>(hi((overlap->max_x - gt.origin_x) / gt.pixel_size_x), 0, raster.width());
  const std::int64_t row0 = std::clamp<std::int64_t>(lo((gt.origin_y - overlap->max_y) / gt.pixel_size_y), 0, raster.height());
  const std::int64_t row1 = std::clamp<std::int64_t>(hi((gt.origin_y - overlap->min_y) / gt.pixel_size_y), 0, raster.height());
  require(col1 > col0 && row1 > row0, ErrorCode::kNoOverlap, "AOI overlap is smaller than a pixel");

  const std::int64_t w = col1 - col0;
  const std::int64_t h = row1 - row0;
  GeoTransform out_gt = gt.shifted(row0, col0);
  const std::vector<std::uint8_t> inside = rasterize_centers(aoi, out_gt, w, h);
  const bool any_outside = std::find(inside.begin(), inside.end(), 0) != inside.end();

  std::optional<double> nodata = raster.nodata();
  if (!nodata && any_outside) {
    nodata = raster.kind() == RasterKind::kImage ? options.image_nodata : kMaskNodata;
  }
  const float fill = nodata ? static_cast<float>(*nodata) : 0.0f;

  std::vector<float> values(static_cast<std::size_t>(raster.bands() * w * h));
  for (std::int64_t b = 0; b < raster.bands(); ++b) {
    for (std::int64_t r = 0; r < h; ++r) {
      for (std::int64_t c = 0; c < w; ++c) {
        const std::size_t dst = static_cast<std::size_t>((b * h + r) * w + c);
        values[dst] = inside[static_cast<std::size_t>(r * w + c)] ? raster.at(b, row0 + r, col0 + c) : fill;
      }
    }
  }
  return RasterGrid(w, h, raster.bands(), std::move(out_gt), raster.kind(), std::move(values), nodata,
                    raster.sample_type());
}

RasterGrid binarize_delineation(const PolygonSet& polygons, const RasterGrid& template_grid) {
  const GeoTransform& gt = template_grid.transform();
  gt.validate();
  if (!polygons.empty()) {
    require_same_crs(polygons.crs_id, gt.crs_id);
  }
  const std::vector<std::uint8_t> inside =
      rasterize_centers(polygons, gt, template_grid.width(), template_grid.height());
  std::vector<float> values(inside.begin(), inside.end());
  return RasterGrid(template_grid.width(), template_grid.height(), 1, gt, RasterKind::kBinaryMask,
                    std::move(values));
}

RasterGrid subtract_cloud(const RasterGrid& ba_mask, const RasterGrid& cloud_mask) {
  require(ba_mask.same_geometry(cloud_mask), ErrorCode::kGridMismatch,
          "BA and cloud masks differ in grid geometry");
  require(ba_mask.bands() == 1 && cloud_mask.bands() == 1, ErrorCode::kGridMismatch,
          "masks must be single-band");
  const auto ba = ba_mask.values();
  const auto cloud = cloud_mask.values();
  std::vector<float> values(ba.size());
  bool any_nodata = false;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (ba_mask.is_nodata(ba[i]) || cloud_mask.is_nodata(cloud[i])) {
      values[i] = static_cast<float>(kMaskNodata);
      any_nodata = true;
    } else {
      values[i] = (ba[i] == 1.0f && cloud[i] != 1.0f) ? 1.0f : 0.0f;
    }
  }
  std::optional<double> nodata;
  if (any_nodata || ba_mask.nodata()) {
    nodata = kMaskNodata;
  }
  return RasterGrid(ba_mask.width(), ba_mask.height(), 1, ba_mask.transform(), RasterKind::kBinaryMask,
                    std::move(values), nodata);
}

RasterGrid resample_nearest(const RasterGrid& source, const GeoTransform& target,
                            std::int64_t target_width, std::int64_t target_height) {
  target.validate();
  require_same_crs(source.transform().crs_id, target.crs_id);
  require(target_width >= 1 && target_height >= 1, ErrorCode::kInvalidArgument,
          "target grid must be non-empty");
  const GeoTransform& sgt = source.transform();

  // Nearest center along one axis: u is the position in source pixel units;
  // ceil(u) - 1 resolves the equidistant case towards the smaller index.
  auto nearest = [](double u, std::int64_t n) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(u)) - 1, 0, n - 1);
  };
  std::vector<std::int64_t> cols(static_cast<std::size_t>(target_width));
  for (std::int64_t c = 0; c < target_width; ++c) {
    cols[static_cast<std::size_t>(c)] =
        nearest((target.center_x(static_cast<double>(c)) - sgt.origin_x) / sgt.pixel_size_x, source.width());
  }
  std::vector<std::int64_t> rows(static_cast<std::size_t>(target_height));
  for (std::int64_t r = 0; r < target_height; ++r) {
    rows[static_cast<std::size_t>(r)] =
        nearest((sgt.origin_y - target.center_y(static_cast<double>(r))) / sgt.pixel_size_y, source.height());
  }

  std::vector<float> values(static_cast<std::size_t>(source.bands() * target_width * target_height));
  std::size_t k = 0;
  for (std::int64_t b = 0; b < source.bands(); ++b) {
    for (std::int64_t r = 0; r < target_height; ++r) {
      for (std::int64_t c = 0; c < target_width; ++c) {
        values[k++] = source.at(b, rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
      }
    }
  }
  return RasterGrid(target_width, target_height, source.bands(), target, source.kind(),
                    std::move(values), source.nodata(), source.sample_type());
}

RasterGrid apply_lc_scheme(const RasterGrid& lc, const RasterGrid& cloud, const LandCoverScheme& scheme) {
  require(lc.same_geometry(cloud), ErrorCode::kGridMismatch, "LC map and cloud mask differ in grid geometry");
  require(lc.bands() == 1 && cloud.bands() == 1, ErrorCode::kGridMismatch, "LC and cloud must be single-band");
  const auto codes = lc.values();
  const auto clouds = cloud.values();
  std::vector<float> values(codes.size());
  bool any_nodata = false;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (!cloud.is_nodata(clouds[i]) && clouds[i] == 1.0f) {
      values[i] = static_cast<float>(scheme.cloud_index);
      continue;
    }
    if (lc.is_nodata(codes[i]) || cloud.is_nodata(clouds[i])) {
      values[i] = static_cast<float>(kMaskNodata);
      any_nodata = true;
      continue;
    }
    const auto it = scheme.code_to_index.find(static_cast<int>(codes[i]));
    require(it != scheme.code_to_index.end() && static_cast<float>(it->first) == codes[i],
            ErrorCode::kUnknownCode, "land-cover code " + std::to_string(codes[i]) + " is not in the scheme");
    values[i] = static_cast<float>(it->second);
  }
  std::optional<double> nodata;
  if (any_nodata) {
    nodata = kMaskNodata;
  }
  return RasterGrid(lc.width(), lc.height(), 1, lc.transform(), RasterKind::kCategoryMap,
                    std::move(values), nodata);
}

}  // namespace burnseg
