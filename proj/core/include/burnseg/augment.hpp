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
#include <random>

namespace burnseg {

/// One training sample; every tensor's last two dims are H x W.
struct Sample {
  torch::Tensor image;              // C x H x W
  torch::Tensor ba;                 // H x W
  std::optional<torch::Tensor> lc;  // H x W
};

struct AugmentDraw {
  bool hflip = false;
  bool vflip = false;
  bool rot90 = false;

  bool any() const { return hflip || vflip || rot90; }
};

/// Uniform double in [0, 1) from the top 53 bits of one generator output.
double unit_uniform(std::mt19937_64& rng);

/// Draws hflip, vflip and rot90 independently, each with probability p.
AugmentDraw draw_augment(double p, std::mt19937_64& rng);

/// Applies hflip, then vflip, then a 90 degree counter-clockwise rotation to
/// the image and both label rasters alike.
Sample apply_augment(const Sample& sample, const AugmentDraw& draw);

/// draw_augment + apply_augment. Patches must be square when p > 0
/// (NON_SQUARE otherwise).
Sample augment(const Sample& sample, double p, std::mt19937_64& rng);

}  // namespace burnseg
