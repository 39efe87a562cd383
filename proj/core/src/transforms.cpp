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


#include "burnseg/transforms.hpp"

#include "burnseg/error.hpp"

namespace burnseg {

using torch::Tensor;

std::string_view transform_name(D4 t) {
  switch (t) {
    case D4::kIdentity: return "identity";
    case D4::kRot90: return "rot90";
    case D4::kRot180: return "rot180";
    case D4::kRot270: return "rot270";
    case D4::kHFlip: return "hflip";
    case D4::kVFlip: return "vflip";
    case D4::kTranspose: return "transpose";
    case D4::kAntiTranspose: return "anti-transpose";
  }
  return "identity";
}

D4 parse_transform(std::string_view name) {
  for (D4 t : kAllD4) {
    if (transform_name(t) == name) {
      return t;
    }
  }
  fail(ErrorCode::kUnknownTransform, "unknown transform '" + std::string(name) + "'");
}

D4 inverse(D4 t) {
  switch (t) {
    case D4::kRot90: return D4::kRot270;
    case D4::kRot270: return D4::kRot90;
    default: return t;
  }
}

bool swaps_axes(D4 t) {
  return t == D4::kRot90 || t == D4::kRot270 || t == D4::kTranspose || t == D4::kAntiTranspose;
}

Tensor apply_transform(D4 t, const Tensor& x) {
  require(x.dim() >= 2, ErrorCode::kShapeError, "transforms need at least two dims");
  Tensor y;
  switch (t) {
    case D4::kIdentity: y = x; break;
    case D4::kRot90: y = torch::rot90(x, 1, {-2, -1}); break;
    case D4::kRot180: y = torch::rot90(x, 2, {-2, -1}); break;
    case D4::kRot270: y = torch::rot90(x, 3, {-2, -1}); break;
    case D4::kHFlip: y = x.flip({-1}); break;
    case D4::kVFlip: y = x.flip({-2}); break;
    case D4::kTranspose: y = x.transpose(-2, -1); break;
    case D4::kAntiTranspose: y = x.transpose(-2, -1).flip({-2, -1}); break;
    default: fail(ErrorCode::kUnknownTransform, "unknown transform");
  }
  return y.contiguous();
}

Tensor invert_transform(D4 t, const Tensor& x) { return apply_transform(inverse(t), x); }

}  // namespace burnseg
