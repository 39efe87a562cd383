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


#include "burnseg/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "burnseg/augment.hpp"
#include "burnseg/blocksplit.hpp"
#include "burnseg/error.hpp"
#include "burnseg/geotiff.hpp"
#include "burnseg/vector_io.hpp"
#include "json.hpp"

namespace burnseg {

namespace fs = std::filesystem;

namespace {

struct Cover {
  int code;
  std::array<double, 4> reflectance;  // Blue, Green, Red, NIR digital numbers
};

// WorldCover codes with made-up band responses.
constexpr std::array<Cover, 8> kCovers = {{
    {10, {320, 520, 330, 3000}},    // tree cover
    {20, {420, 560, 500, 2300}},    // shrubland
    {30, {460, 680, 560, 2700}},    // grassland
    {40, {520, 720, 640, 2900}},    // cropland
    {50, {1200, 1220, 1260, 1450}}, // built-up
    {60, {1500, 1520, 1620, 1900}}, // bare
    {80, {650, 700, 500, 90}},      // water
    {90, {380, 520, 420, 1900}},    // wetland
}};

constexpr std::array<double, 4> kBurned = {260, 240, 330, 520};
constexpr std::array<double, 4> kCloud = {3400, 3450, 3500, 3600};

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

// Symmetric noise in [-1, 1] with a roughly bell-shaped profile.
double noise(std::mt19937_64& rng) {
  return (unit_uniform(rng) + unit_uniform(rng) + unit_uniform(rng) - 1.5) / 1.5;
}

double covered_fraction(const PolygonSet& set, const GeoTransform& gt, std::int64_t w, std::int64_t h) {
  if (set.empty()) {
    return 0.0;
  }
  const auto mask = rasterize_centers(set, gt, w, h);
  return static_cast<double>(std::count(mask.begin(), mask.end(), std::uint8_t{1})) / static_cast<double>(w * h);
}

}  // namespace

SyntheticScene generate_scene(const SynthConfig& cfg, std::uint64_t seed, std::int64_t index,
                              const std::string& role) {
  cfg.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);

  const std::int64_t w = cfg.width;
  const std::int64_t h = cfg.height;
  const double span_x = static_cast<double>(w) * cfg.pixel_size;
  const double span_y = static_cast<double>(h) * cfg.pixel_size;
  GeoTransform gt;
  gt.origin_x = cfg.origin_x + static_cast<double>(index) * (span_x + 1000.0);
  gt.origin_y = cfg.origin_y;
  gt.pixel_size_x = cfg.pixel_size;
  gt.pixel_size_y = cfg.pixel_size;
  gt.crs_id = cfg.crs;
  const Box extent = gt.extent(w, h);

  SyntheticScene scene{role + "_" + std::to_string(index),
                       role,
                       RasterGrid::filled(1, 1, 1, gt, RasterKind::kImage, 0.0f),
                       RasterGrid::filled(1, 1, 1, gt, RasterKind::kBinaryMask, 0.0f),
                       RasterGrid::filled(1, 1, 1, gt, RasterKind::kCategoryMap, 10.0f),
                       PolygonSet{cfg.crs, {}},
                       PolygonSet{cfg.crs, {}},
                       0.0};

  // Land cover: nearest-seed regions on the coarse grid.
  GeoTransform lc_gt = gt;
  lc_gt.pixel_size_x = cfg.lc_pixel_size;
  lc_gt.pixel_size_y = cfg.lc_pixel_size;
  const auto lc_w = static_cast<std::int64_t>(std::ceil(span_x / cfg.lc_pixel_size - 1e-9));
  const auto lc_h = static_cast<std::int64_t>(std::ceil(span_y / cfg.lc_pixel_size - 1e-9));
  const int n_seeds = 6;
  std::vector<Point> seeds;
  std::vector<int> seed_cover;
  for (int i = 0; i < n_seeds; ++i) {
    seeds.push_back({uniform(rng, extent.min_x, extent.max_x), uniform(rng, extent.min_y, extent.max_y)});
    seed_cover.push_back(static_cast<int>(bounded_draw(rng, kCovers.size())));
  }
  std::vector<float> lc_values(static_cast<std::size_t>(lc_w * lc_h));
  for (std::int64_t r = 0; r < lc_h; ++r) {
    for (std::int64_t c = 0; c < lc_w; ++c) {
      const Point p{lc_gt.center_x(static_cast<double>(c)), lc_gt.center_y(static_cast<double>(r))};
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_seeds; ++i) {
        const double d = std::hypot(p.x - seeds[static_cast<std::size_t>(i)].x, p.y - seeds[static_cast<std::size_t>(i)].y);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      lc_values[static_cast<std::size_t>(r * lc_w + c)] =
          static_cast<float>(kCovers[static_cast<std::size_t>(seed_cover[static_cast<std::size_t>(best)])].code);
    }
  }
  scene.landcover = RasterGrid(lc_w, lc_h, 1, lc_gt, RasterKind::kCategoryMap, std::move(lc_values), std::nullopt,
                               SampleType::kUInt8);

  // Burn scars: add ellipses until the burned fraction reaches a target drawn
  // from the configured range; a scar that overshoots the maximum is dropped.
  const double target = uniform(rng, cfg.burned_fraction_min, cfg.burned_fraction_max);
  const double min_side = static_cast<double>(std::min(w, h)) * cfg.pixel_size;
  double fraction = 0.0;
  for (int attempt = 0; attempt < 400 && fraction < target; ++attempt) {
    const double shrink = attempt < 200 ? 1.0 : 0.35;
    const double rx = uniform(rng, 0.06, 0.22) * min_side * shrink;
    const double ry = rx * uniform(rng, 0.5, 1.0);
    const Point center{uniform(rng, extent.min_x, extent.max_x), uniform(rng, extent.min_y, extent.max_y)};
    scene.delineation.polygons.push_back(ellipse_polygon(center, rx, ry, 40, uniform(rng, 0.0, std::numbers::pi)));
    const double next = covered_fraction(scene.delineation, gt, w, h);
    if (next > cfg.burned_fraction_max) {
      scene.delineation.polygons.pop_back();
      continue;
    }
    fraction = next;
  }
  require(fraction >= cfg.burned_fraction_min && fraction <= cfg.burned_fraction_max, ErrorCode::kBadConfig,
          "synthetic generator could not hit the burned fraction range");
  scene.burned_fraction = fraction;

  // Clouds.
  PolygonSet clouds{cfg.crs, {}};
  const auto n_clouds = static_cast<std::int64_t>(bounded_draw(rng, static_cast<std::uint64_t>(cfg.max_clouds) + 1));
  for (std::int64_t i = 0; i < n_clouds; ++i) {
    const double r = uniform(rng, 0.03, 0.08) * min_side;
    const Point center{uniform(rng, extent.min_x, extent.max_x), uniform(rng, extent.min_y, extent.max_y)};
    clouds.polygons.push_back(ellipse_polygon(center, r, r * uniform(rng, 0.6, 1.0), 32, uniform(rng, 0.0, 3.0)));
  }
  const auto cloud_mask = clouds.empty() ? std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 0)
                                         : rasterize_centers(clouds, gt, w, h);
  std::vector<float> cloud_values(cloud_mask.begin(), cloud_mask.end());
  scene.cloud = RasterGrid(w, h, 1, gt, RasterKind::kBinaryMask, std::move(cloud_values), std::nullopt,
                           SampleType::kUInt8);

  // Imagery.
  const auto burned = rasterize_centers(scene.delineation, gt, w, h);
  const RasterGrid lc_fine = resample_nearest(scene.landcover, gt, w, h);
  std::map<int, std::size_t> cover_of_code;
  for (std::size_t i = 0; i < kCovers.size(); ++i) {
    cover_of_code[kCovers[i].code] = i;
  }
  std::vector<float> image(static_cast<std::size_t>(4 * w * h));
  for (std::int64_t r = 0; r < h; ++r) {
    for (std::int64_t c = 0; c < w; ++c) {
      const auto k = static_cast<std::size_t>(r * w + c);
      const auto code = static_cast<int>(lc_fine.at(0, r, c));
      const std::array<double, 4>& base =
          cloud_mask[k] ? kCloud : (burned[k] ? kBurned : kCovers[cover_of_code.at(code)].reflectance);
      for (std::size_t b = 0; b < 4; ++b) {
        const double v = base[b] * (1.0 + 0.12 * noise(rng));
        image[b * static_cast<std::size_t>(w * h) + k] = static_cast<float>(std::clamp(std::round(v), 1.0, 65535.0));
      }
    }
  }
  scene.image = RasterGrid(w, h, 4, gt, RasterKind::kImage, std::move(image), std::nullopt, SampleType::kUInt16);

  // AOI: the scene footprint with clipped corners, inset by one pixel.
  const double inset = cfg.pixel_size;
  const double cut_x = uniform(rng, 0.1, 0.25) * span_x;
  const double cut_y = uniform(rng, 0.1, 0.25) * span_y;
  const double x0 = extent.min_x + inset;
  const double x1 = extent.max_x - inset;
  const double y0 = extent.min_y + inset;
  const double y1 = extent.max_y - inset;
  scene.aoi.polygons.push_back(Polygon{{{x0 + cut_x, y0},
                                        {x1 - cut_x, y0},
                                        {x1, y0 + cut_y},
                                        {x1, y1},
                                        {x0 + cut_x, y1},
                                        {x0, y1 - cut_y},
                                        {x0, y0 + cut_y}},
                                       {}});
  return scene;
}

std::vector<SceneInput> write_synthetic_dataset(const SynthConfig& cfg, std::uint64_t seed, const fs::path& dir) {
  std::vector<SceneInput> inputs;
  nlohmann::json index = nlohmann::json::array();
  const std::int64_t total = cfg.train_scenes + cfg.predict_scenes;
  for (std::int64_t i = 0; i < total; ++i) {
    const std::string role = i < cfg.train_scenes ? "train" : "predict";
    const SyntheticScene scene = generate_scene(cfg, seed, i, role);
    const fs::path sd = dir / scene.id;
    fs::create_directories(sd);
    SceneInput in{scene.id, role, sd / "image.tif", sd / "delineation.geojson", sd / "cloud.tif",
                  sd / "landcover.tif", sd / "aoi.geojson"};
    write_raster(scene.image, in.image);
    write_polygons(scene.delineation, in.delineation);
    write_raster(scene.cloud, in.cloud);
    write_raster(scene.landcover, in.landcover);
    write_polygons(scene.aoi, in.aoi);
    index.push_back({{"id", in.id},
                     {"role", in.role},
                     {"image", scene.id + "/image.tif"},
                     {"delineation", scene.id + "/delineation.geojson"},
                     {"cloud", scene.id + "/cloud.tif"},
                     {"landcover", scene.id + "/landcover.tif"},
                     {"aoi", scene.id + "/aoi.geojson"},
                     {"burned_fraction", scene.burned_fraction}});
    inputs.push_back(in);
  }
  std::ofstream out(dir / "scenes.json");
  require(out.good(), ErrorCode::kIoError, "cannot write '" + (dir / "scenes.json").string() + "'");
  out << nlohmann::json{{"format", "burnseg-scenes"}, {"version", 1}, {"seed", seed}, {"scenes", index}}.dump(1)
      << "\n";
  return inputs;
}

std::vector<SceneInput> read_scene_index(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open scene index '" + path.string() + "'");
  std::vector<SceneInput> out;
  try {
    const auto doc = nlohmann::json::parse(in);
    require(doc.at("format") == "burnseg-scenes", ErrorCode::kUnsupportedFormat,
            "'" + path.string() + "' is not a scene index");
    const fs::path base = path.parent_path();
    for (const auto& s : doc.at("scenes")) {
      out.push_back({s.at("id").get<std::string>(), s.at("role").get<std::string>(),
                     base / s.at("image").get<std::string>(), base / s.at("delineation").get<std::string>(),
                     base / s.at("cloud").get<std::string>(), base / s.at("landcover").get<std::string>(),
                     base / s.at("aoi").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what());
  }
  return out;
}

}  // namespace burnseg
