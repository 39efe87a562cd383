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


#include "burnseg/augment.hpp"

#include "burnseg/error.hpp"

namespace burnseg {

using torch::Tensor;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

AugmentDraw draw_augment(double p, std::mt19937_64& rng) {
  AugmentDraw d;
  d.hflip = unit_uniform(rng) < p;
  d.vflip = unit_uniform(rng) < p;
  d.rot90 = unit_uniform(rng) < p;
  return d;
}

namespace {

Tensor transform(Tensor x, const AugmentDraw& d) {
  if (d.hflip) {
    x = x.flip({-1});
  }
  if (d.vflip) {
    x = x.flip({-2});
  }
  if (d.rot90) {
    x = torch::rot90(x, 1, {-2, -1});
  }
  return x.contiguous();
}

}  // namespace

Sample apply_augment(const Sample& sample, const AugmentDraw& draw) {
  if (draw.rot90) {
    require(sample.image.size(-1) == sample.image.size(-2), ErrorCode::kNonSquare,
            "90 degree rotations need square patches");
  }
  Sample out;
  out.image = transform(sample.image, draw);
  out.ba = transform(sample.ba, draw);
  if (sample.lc) {
    out.lc = transform(*sample.lc, draw);
  }
  return out;
}

Sample augment(const Sample& sample, double p, std::mt19937_64& rng) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument, "augmentation probability must lie in [0, 1]");
  if (p > 0.0) {
    require(sample.image.size(-1) == sample.image.size(-2), ErrorCode::kNonSquare,
            "augmentation needs square patches");
  }
  return apply_augment(sample, draw_augment(p, rng));
}

}  // namespace burnseg
