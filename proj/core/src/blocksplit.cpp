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

#include "burnseg/blocksplit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "burnseg/error.hpp"
#include "json.hpp"

namespace burnseg {

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "TRAIN";
    case Split::kVal: return "VAL";
    case Split::kTest: return "TEST";
  }
  return "TRAIN";
}

Split parse_split(std::string_view name) {
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    if (split_name(s) == name) {
      return s;
    }
  }
  fail(ErrorCode::kUnsupportedFormat, "unknown split '" + std::string(name) + "'");
}

std::optional<std::int64_t> BlockGrid::block_at(Point p) const {
  const double u = std::floor((p.x - anchor_x) / block_size);
  const double v = std::floor((p.y - anchor_y) / block_size);
  if (!(u >= 0.0 && v >= 0.0 && u < static_cast<double>(cols) && v < static_cast<double>(rows))) {
    return std::nullopt;
  }
  const std::int64_t id = static_cast<std::int64_t>(v) * cols + static_cast<std::int64_t>(u);
  const auto it = std::lower_bound(blocks.begin(), blocks.end(), id,
                                   [](const Block& b, std::int64_t key) { return b.id < key; });
  if (it == blocks.end() || it->id != id) {
    return std::nullopt;
  }
  return id;
}

BlockGrid build_block_grid(const PolygonSet& aoi, double block_size, std::string aoi_id) {
  require(block_size > 0.0, ErrorCode::kInvalidArgument, "block size must be positive");
  require(!aoi.empty(), ErrorCode::kEmptyAoi, "AOI has no polygons");
  double area = 0.0;
  for (const Polygon& polygon : aoi.polygons) {
    area += polygon_area(polygon);
  }
  require(area > 0.0, ErrorCode::kEmptyAoi, "AOI has zero area");

  const Box bbox = bounding_box(aoi);
  BlockGrid grid;
  grid.aoi_id = std::move(aoi_id);
  grid.block_size = block_size;
  grid.anchor_x = bbox.min_x;
  grid.anchor_y = bbox.min_y;
  auto count = [&](double extent) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(extent / block_size - 1e-9)));
  };
  grid.cols = count(bbox.width());
  grid.rows = count(bbox.height());
  for (std::int64_t row = 0; row < grid.rows; ++row) {
    for (std::int64_t col = 0; col < grid.cols; ++col) {
      const Box box{bbox.min_x + static_cast<double>(col) * block_size,
                    bbox.min_y + static_cast<double>(row) * block_size,
                    bbox.min_x + static_cast<double>(col + 1) * block_size,
                    bbox.min_y + static_cast<double>(row + 1) * block_size};
      if (clipped_area(aoi, box) > 0.0) {
        grid.blocks.push_back({row * grid.cols + col, col, row, box});
      }
    }
  }
  return grid;
}

std::array<std::size_t, 3> SplitAssignment::block_counts() const {
  std::array<std::size_t, 3> counts{};
  for (const auto& [id, split] : block_to_split) {
    ++counts[static_cast<std::size_t>(split)];
  }
  return counts;
}

std::array<std::size_t, 3> apportion(std::size_t n, const SplitFractions& fractions) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double quota = fractions[k] * static_cast<double>(n);
    // Guard against quotas like 0.7 * 10 landing a hair under an integer.
    counts[k] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainders[k] = quota - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % 3) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound + 1) % bound;
  std::uint64_t x = rng();
  while (x > limit) {
    x = rng();
  }
  return x % bound;
}

SplitAssignment assign_splits(const BlockGrid& grid, const SplitFractions& fractions, std::uint64_t seed) {
  double total = 0.0;
  for (double f : fractions) {
    require(f >= 0.0 && f <= 1.0, ErrorCode::kBadFractions, "each fraction must lie in [0, 1]");
    total += f;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kBadFractions,
          "fractions sum to " + std::to_string(total) + ", expected 1");

  std::vector<std::int64_t> ids;
  ids.reserve(grid.blocks.size());
  for (const Block& block : grid.blocks) {
    ids.push_back(block.id);
  }
  std::sort(ids.begin(), ids.end());

  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i));
    std::swap(ids[i - 1], ids[j]);
  }

  SplitAssignment out;
  out.fractions = fractions;
  out.seed = seed;
  out.grid = grid;
  const auto counts = apportion(ids.size(), fractions);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t n = 0; n < counts[k]; ++n) {
      out.block_to_split[ids[cursor++]] = static_cast<Split>(k);
    }
  }
  return out;
}

SplitAssignment assign_patches(const PatchSet& patches, const SplitAssignment& assignment) {
  SplitAssignment out = assignment;
  out.patch_to_split.clear();
  out.excluded_patches.clear();
  const GeoTransform& gt = patches.source_transform;
  const double half = static_cast<double>(patches.spec.patch_size) / 2.0;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const Placement& p = patches.placements[i];
    const Point center{gt.origin_x + (static_cast<double>(p.col) + half) * gt.pixel_size_x,
                       gt.origin_y - (static_cast<double>(p.row) + half) * gt.pixel_size_y};
    const auto block = assignment.grid.block_at(center);
    if (!block) {
      out.excluded_patches.push_back(i);
      continue;
    }
    out.patch_to_split[i] = assignment.block_to_split.at(*block);
  }
  return out;
}

double SplitBalance::burned_fraction(Split split) const {
  const auto k = static_cast<std::size_t>(split);
  return pixels[k] > 0 ? static_cast<double>(burned[k]) / static_cast<double>(pixels[k]) : 0.0;
}

SplitBalance split_balance(const SplitAssignment& assignment, const PatchSet& ba_patches) {
  SplitBalance balance;
  for (const auto& [index, split] : assignment.patch_to_split) {
    const RasterGrid& patch = ba_patches.patches.at(index);
    const auto k = static_cast<std::size_t>(split);
    for (std::int64_t r = 0; r < ba_patches.valid_rows(index); ++r) {
      for (std::int64_t c = 0; c < ba_patches.valid_cols(index); ++c) {
        const float v = patch.at(0, r, c);
        if (patch.is_nodata(v)) {
          continue;
        }
        ++balance.pixels[k];
        balance.burned[k] += v == 1.0f ? 1 : 0;
      }
    }
  }
  return balance;
}

namespace {

using nlohmann::json;

json assignment_to_json(const SplitAssignment& a) {
  json blocks = json::array();
  for (const Block& block : a.grid.blocks) {
    blocks.push_back({{"id", block.id},
                      {"col", block.col},
                      {"row", block.row},
                      {"box", {block.box.min_x, block.box.min_y, block.box.max_x, block.box.max_y}},
                      {"split", split_name(a.block_to_split.at(block.id))}});
  }
  json patches = json::array();
  for (const auto& [index, split] : a.patch_to_split) {
    patches.push_back({{"index", index}, {"split", split_name(split)}});
  }
  return {{"aoi_id", a.grid.aoi_id},
          {"seed", a.seed},
          {"fractions", a.fractions},
          {"block_size", a.grid.block_size},
          {"anchor", {a.grid.anchor_x, a.grid.anchor_y}},
          {"grid_cols", a.grid.cols},
          {"grid_rows", a.grid.rows},
          {"blocks", blocks},
          {"patches", patches},
          {"excluded_patches", a.excluded_patches}};
}

SplitAssignment assignment_from_json(const json& j) {
  SplitAssignment a;
  a.grid.aoi_id = j.at("aoi_id").get<std::string>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.fractions = j.at("fractions").get<SplitFractions>();
  a.grid.block_size = j.at("block_size").get<double>();
  a.grid.anchor_x = j.at("anchor").at(0).get<double>();
  a.grid.anchor_y = j.at("anchor").at(1).get<double>();
  a.grid.cols = j.at("grid_cols").get<std::int64_t>();
  a.grid.rows = j.at("grid_rows").get<std::int64_t>();
  for (const json& b : j.at("blocks")) {
    Block block;
    block.id = b.at("id").get<std::int64_t>();
    block.col = b.at("col").get<std::int64_t>();
    block.row = b.at("row").get<std::int64_t>();
    const auto box = b.at("box").get<std::array<double, 4>>();
    block.box = Box{box[0], box[1], box[2], box[3]};
    a.grid.blocks.push_back(block);
    a.block_to_split[block.id] = parse_split(b.at("split").get<std::string>());
  }
  for (const json& p : j.at("patches")) {
    a.patch_to_split[p.at("index").get<std::size_t>()] = parse_split(p.at("split").get<std::string>());
  }
  a.excluded_patches = j.at("excluded_patches").get<std::vector<std::size_t>>();
  return a;
}

}  // namespace

void write_split_file(const std::vector<SplitAssignment>& assignments, const std::filesystem::path& path) {
  json doc = {{"format", "burnseg-split"}, {"version", 1}, {"prng", "std::mt19937_64 + rejection bounded draw"}};
  json list = json::array();
  for (const SplitAssignment& a : assignments) {
    list.push_back(assignment_to_json(a));
  }
  doc["assignments"] = list;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << doc.dump(1) << "\n";
}

std::vector<SplitAssignment> read_split_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::vector<SplitAssignment> out;
  try {
    const json doc = json::parse(in);
    require(doc.at("format") == "burnseg-split" && doc.at("version") == 1, ErrorCode::kUnsupportedFormat,
            "'" + path.string() + "' is not a split file");
    for (const json& j : doc.at("assignments")) {
      out.push_back(assignment_from_json(j));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what());
  }
  return out;
}

}  // namespace burnseg
