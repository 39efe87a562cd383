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


#include "burnseg/loss_scaler.hpp"

#include <algorithm>
#include <cmath>

#include "burnseg/error.hpp"

namespace burnseg {

void LossScalerConfig::validate() const {
  require(init_scale > 0.0 && min_scale > 0.0 && init_scale >= min_scale, ErrorCode::kBadConfig,
          "loss scale must be positive and >= min_scale");
  require(growth_interval >= 1, ErrorCode::kBadConfig, "growth_interval must be >= 1");
  require(backoff_factor > 0.0 && backoff_factor < 1.0, ErrorCode::kBadConfig, "backoff_factor must lie in (0, 1)");
  require(growth_factor > 1.0, ErrorCode::kBadConfig, "growth_factor must be > 1");
}

LossScaler::LossScaler(LossScalerConfig config) : config_(config), scale_(config.init_scale) { config_.validate(); }

void LossScaler::update(bool gradients_finite) {
  if (gradients_finite) {
    skips_at_min_ = 0;
    if (++steps_since_overflow_ >= config_.growth_interval) {
      scale_ *= config_.growth_factor;
      steps_since_overflow_ = 0;
    }
    return;
  }
  ++total_skipped_;
  steps_since_overflow_ = 0;
  if (scale_ <= config_.min_scale) {
    ++skips_at_min_;
  }
  scale_ = std::max(config_.min_scale, scale_ * config_.backoff_factor);
}

bool gradients_finite(const std::vector<torch::Tensor>& params) {
  for (const torch::Tensor& p : params) {
    const torch::Tensor& g = p.grad();
    if (g.defined() && !torch::isfinite(g).all().item<bool>()) {
      return false;
    }
  }
  return true;
}

bool scaled_backward(const torch::Tensor& loss, LossScaler& scaler, const std::vector<torch::Tensor>& params) {
  const double scale = scaler.scale();
  (loss * scale).backward();
  const bool finite = gradients_finite(params);
  torch::NoGradGuard no_grad;
  for (const torch::Tensor& p : params) {
    torch::Tensor g = p.grad();
    if (!g.defined()) {
      continue;
    }
    if (finite) {
      g.div_(scale);
    } else {
      g.zero_();
    }
  }
  scaler.update(finite);
  return finite;
}

}  // namespace burnseg
