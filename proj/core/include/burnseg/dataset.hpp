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

#include <torch/torch.h>

#include <optional>
#include <string>
#include <vector>

#include "burnseg/patching.hpp"
#include "burnseg/raster.hpp"

namespace burnseg {

/// Per-band mean and standard deviation used to normalize model inputs.
struct BandStats {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool empty() const { return mean.empty(); }
  /// (x - mean) / stddev per band of a B x C x H x W float tensor.
  torch::Tensor normalize(const torch::Tensor& images) const;

  std::string to_json() const;
  static BandStats from_json(const std::string& text);

  bool operator==(const BandStats&) const = default;
};

/// Statistics over every pixel of an N x C x H x W tensor, accumulated in
/// double. Bands with zero spread get stddev 1.
BandStats compute_band_stats(const torch::Tensor& images);

/// Stacked patches ready for training or evaluation.
struct TrainingSet {
  torch::Tensor images;             // N x C x H x W float32
  torch::Tensor ba;                 // N x H x W uint8 (0, 1, or 255 = ignore)
  std::optional<torch::Tensor> lc;  // N x H x W uint8 class indices (255 = ignore)

  std::int64_t size() const { return images.defined() ? images.size(0) : 0; }
  TrainingSet select(const std::vector<std::int64_t>& indices) const;
};

/// C x H x W float32 copy of a raster's values.
torch::Tensor raster_to_tensor(const RasterGrid& raster);

/// Builds a TrainingSet from the patches at `indices` of aligned image, BA and
/// optional LC patch sets. Label nodata becomes the ignore label.
TrainingSet dataset_from_patches(const PatchSet& images, const PatchSet& ba, const PatchSet* lc,
                                 const std::vector<std::size_t>& indices);

/// Concatenates sets along the sample axis (LC kept only when all have it).
TrainingSet concat(const std::vector<TrainingSet>& sets);

}  // namespace burnseg
