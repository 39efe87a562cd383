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


// Reference implementations for tests. Loops over plain vectors, no torch ops
// beyond reading and writing tensor storage.

#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "burnseg/raster.hpp"
#include "burnseg/transforms.hpp"

namespace burnseg::testing {

struct OracleCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Pixel-by-pixel tally; truth value 255 is skipped.
OracleCounts count_pixels(const std::vector<std::uint8_t>& pred, const std::vector<std::uint8_t>& truth);
double oracle_dice(const OracleCounts& c);
double oracle_iou(const OracleCounts& c);

/// Source index (row, col) that lands at (i, j) of an n x n image under t.
std::pair<std::int64_t, std::int64_t> d4_source(D4 t, std::int64_t n, std::int64_t i, std::int64_t j);
/// Same, inverse direction: where (i, j) of the input goes.
std::pair<std::int64_t, std::int64_t> d4_target(D4 t, std::int64_t n, std::int64_t i, std::int64_t j);

/// Applies t to the last two dims of a contiguous float/double tensor, element by element.
torch::Tensor d4_apply_loop(D4 t, const torch::Tensor& x);

/// Soft Dice loss on flat vectors; labels 255 skipped.
double oracle_binary_dice_loss(const std::vector<double>& probs, const std::vector<int>& labels, double smooth);
/// probs laid out class-major: probs[c * n + k].
double oracle_multiclass_dice_loss(const std::vector<double>& probs, const std::vector<int>& labels,
                                   std::int64_t classes, double smooth);

/// Single-band float raster with uniform noise, 1 m pixels.
RasterGrid random_raster(std::int64_t width, std::int64_t height, std::int64_t bands, std::mt19937_64& rng,
                         RasterKind kind = RasterKind::kImage);

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace burnseg::testing
