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
#include <string_view>

#include "burnseg/models.hpp"

namespace burnseg {

enum class Framework {
  kSTL,  // burned-area loss only
  kMTL,  // burned-area loss plus weighted land-cover loss
};

std::string_view framework_name(Framework framework);
Framework parse_framework(std::string_view name);

struct LossConfig {
  double lambda_lc = 0.3;
  double dice_smooth = 1.0;

  void validate() const;
  /// 0.3 for UNET_RN34, 0.2 for SEGFORMER_B2.
  static LossConfig defaults_for(Architecture arch);
};

/// Label value excluded from every loss and metric.
inline constexpr std::int64_t kIgnoreLabel = 255;

/// Soft Dice loss, 1 - mean_c (2 sum(p g) + eps) / (sum(p) + sum(g) + eps),
/// with sums over batch and pixels.
///
/// probs: B x C x H x W. For C == 1 the target is binary (B x H x W or
/// B x 1 x H x W) and only the foreground term is used. For C > 1 the target
/// holds class indices (B x H x W) and the mean runs over classes present in
/// the target. Pixels labelled kIgnoreLabel are excluded.
torch::Tensor dice_loss(const torch::Tensor& probs, const torch::Tensor& target, double smooth = 1.0);

struct LossTerms {
  torch::Tensor total;
  torch::Tensor ba;
  torch::Tensor lc;  // undefined for STL
};

/// STL: L_BA. MTL: L_BA + lambda * L_LC. Takes logits; the BA head goes
/// through a sigmoid and the LC head through a softmax.
LossTerms combined_loss(const torch::Tensor& ba_logits, const std::optional<torch::Tensor>& lc_logits,
                        const torch::Tensor& y_ba, const std::optional<torch::Tensor>& y_lc,
                        const LossConfig& config, Framework framework);

}  // namespace burnseg
