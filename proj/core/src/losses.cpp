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


#include "burnseg/losses.hpp"

#include <cmath>

#include "burnseg/error.hpp"
#include "burnseg/precision.hpp"

namespace burnseg {

using torch::Tensor;

std::string_view framework_name(Framework framework) {
  return framework == Framework::kMTL ? "MTL" : "STL";
}

Framework parse_framework(std::string_view name) {
  if (name == "STL") {
    return Framework::kSTL;
  }
  if (name == "MTL") {
    return Framework::kMTL;
  }
  fail(ErrorCode::kBadConfig, "unknown framework '" + std::string(name) + "' (expected STL or MTL)");
}

void LossConfig::validate() const {
  require(lambda_lc >= 0.0 && std::isfinite(lambda_lc), ErrorCode::kBadConfig, "lambda_lc must be >= 0");
  require(dice_smooth > 0.0 && std::isfinite(dice_smooth), ErrorCode::kBadConfig, "dice_smooth must be > 0");
}

LossConfig LossConfig::defaults_for(Architecture arch) {
  LossConfig c;
  c.lambda_lc = arch == Architecture::kSegFormerMiTB2 ? 0.2 : 0.3;
  return c;
}

Tensor dice_loss(const Tensor& probs_in, const Tensor& target_in, double smooth) {
  require(probs_in.dim() == 4, ErrorCode::kShapeError, "probs must be B x C x H x W");
  require(smooth > 0.0, ErrorCode::kInvalidArgument, "dice smoothing must be > 0");
  const std::int64_t classes = probs_in.size(1);
  Tensor target = target_in;
  if (target.dim() == 4) {
    require(target.size(1) == 1, ErrorCode::kShapeError, "4-d targets must have one channel");
    target = target.squeeze(1);
  }
  require(target.dim() == 3 && target.size(0) == probs_in.size(0) && target.size(1) == probs_in.size(2) &&
              target.size(2) == probs_in.size(3),
          ErrorCode::kShapeError, "target shape does not match probs");

  const Tensor probs = cast_for(OpClass::kLoss, probs_in);
  const Tensor labels = target.to(torch::kLong);
  const Tensor valid = labels.ne(kIgnoreLabel).unsqueeze(1).to(probs.scalar_type());  // B x 1 x H x W
  const std::vector<std::int64_t> dims = {0, 2, 3};

  if (classes == 1) {
    const Tensor g = labels.eq(1).unsqueeze(1).to(probs.scalar_type()) * valid;
    const Tensor p = probs * valid;
    const Tensor inter = (p * g).sum();
    const Tensor score = (2.0 * inter + smooth) / (p.sum() + g.sum() + smooth);
    return 1.0 - score;
  }

  const Tensor safe = labels.masked_fill(labels.eq(kIgnoreLabel), 0);
  require(safe.min().item<std::int64_t>() >= 0 && safe.max().item<std::int64_t>() < classes, ErrorCode::kShapeError,
          "class index out of range for " + std::to_string(classes) + " classes");
  const Tensor g = torch::one_hot(safe, classes).permute({0, 3, 1, 2}).to(probs.scalar_type()) * valid;
  const Tensor p = probs * valid;
  const Tensor inter = (p * g).sum(dims);
  const Tensor g_sum = g.sum(dims);
  const Tensor scores = (2.0 * inter + smooth) / (p.sum(dims) + g_sum + smooth);
  const Tensor present = g_sum.gt(0).to(probs.scalar_type());
  const Tensor n_present = present.sum();
  if (n_present.item<double>() == 0.0) {
    return (p.sum() * 0.0);
  }
  return 1.0 - (scores * present).sum() / n_present;
}

LossTerms combined_loss(const Tensor& ba_logits, const std::optional<Tensor>& lc_logits, const Tensor& y_ba,
                        const std::optional<Tensor>& y_lc, const LossConfig& config, Framework framework) {
  config.validate();
  LossTerms terms;
  terms.ba = dice_loss(torch::sigmoid(cast_for(OpClass::kLoss, ba_logits)), y_ba, config.dice_smooth);
  if (framework == Framework::kSTL) {
    terms.total = terms.ba;
    return terms;
  }
  require(lc_logits.has_value() && lc_logits->defined(), ErrorCode::kMissingLc, "MTL needs land-cover logits");
  require(y_lc.has_value() && y_lc->defined(), ErrorCode::kMissingLc, "MTL needs land-cover labels");
  terms.lc = dice_loss(torch::softmax(cast_for(OpClass::kLoss, *lc_logits), 1), *y_lc, config.dice_smooth);
  terms.total = terms.ba + config.lambda_lc * terms.lc;
  return terms;
}

}  // namespace burnseg
