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

#include <array>
#include <string_view>

namespace burnseg {

/// The eight symmetries of the square, acting on the last two tensor dims.
/// Rotations are counter-clockwise.
enum class D4 {
  kIdentity,
  kRot90,
  kRot180,
  kRot270,
  kHFlip,          // mirror left-right
  kVFlip,          // mirror top-bottom
  kTranspose,      // swap rows and columns
  kAntiTranspose,  // reflect across the anti-diagonal
};

inline constexpr std::array<D4, 8> kAllD4 = {D4::kIdentity, D4::kRot90,  D4::kRot180,    D4::kRot270,
                                             D4::kHFlip,    D4::kVFlip,  D4::kTranspose, D4::kAntiTranspose};

std::string_view transform_name(D4 t);
/// UNKNOWN_TRANSFORM for names outside the group.
D4 parse_transform(std::string_view name);

D4 inverse(D4 t);
/// True for transforms that exchange height and width.
bool swaps_axes(D4 t);

torch::Tensor apply_transform(D4 t, const torch::Tensor& x);
torch::Tensor invert_transform(D4 t, const torch::Tensor& x);

}  // namespace burnseg
