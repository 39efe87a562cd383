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

#include <cstdint>
#include <vector>

namespace burnseg {

struct LossScalerConfig {
  double init_scale = 65536.0;  // 2^16
  std::int64_t growth_interval = 2000;
  double backoff_factor = 0.5;
  double growth_factor = 2.0;
  double min_scale = 1.0;

  void validate() const;
};

/// Dynamic loss scale: halves on overflow, doubles after `growth_interval`
/// consecutive finite steps, never drops below `min_scale`.
class LossScaler {
 public:
  explicit LossScaler(LossScalerConfig config = {});

  double scale() const { return scale_; }
  std::int64_t steps_since_overflow() const { return steps_since_overflow_; }
  /// Consecutive skipped steps taken while already at the minimum scale.
  std::int64_t skips_at_min_scale() const { return skips_at_min_; }
  std::int64_t total_skipped() const { return total_skipped_; }
  const LossScalerConfig& config() const { return config_; }

  /// Records the outcome of one step and adjusts the scale.
  void update(bool gradients_finite);

 private:
  LossScalerConfig config_;
  double scale_;
  std::int64_t steps_since_overflow_ = 0;
  std::int64_t skips_at_min_ = 0;
  std::int64_t total_skipped_ = 0;
};

/// Backpropagates scale * loss, then divides every gradient by the scale.
/// Returns false (gradients zeroed, step to be skipped) when any gradient is
/// non-finite. Updates the scaler either way. Gradients must be cleared by
/// the caller beforehand.
bool scaled_backward(const torch::Tensor& loss, LossScaler& scaler, const std::vector<torch::Tensor>& params);

/// True when every defined gradient of `params` is finite.
bool gradients_finite(const std::vector<torch::Tensor>& params);

}  // namespace burnseg
