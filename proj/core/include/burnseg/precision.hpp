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

#include <string_view>

namespace burnseg {

/// Operation classes of the mixed-precision policy. Every layer in the model
/// zoo routes its inputs through `cast_for` with one of these classes, so a
/// backend conforms to the policy by honouring the table below.
///
///   class           full precision   mixed precision
///   convolution     float32          float16
///   linear          float32          float16
///   matmul          float32          float16
///   normalization   float32          float32
///   softmax         float32          float32
///   interpolation   float32          float32
///   reduction       float32          float32
///   loss            float32          float32
///   activation      (input dtype)    (input dtype)
///
/// Master parameters always stay float32; casts are differentiable, so
/// gradients arrive on the masters in float32.
enum class OpClass {
  kConvolution,
  kLinear,
  kMatMul,
  kNormalization,
  kSoftmax,
  kInterpolation,
  kReduction,
  kLoss,
  kActivation,
};

std::string_view op_class_name(OpClass op);

struct PrecisionPolicy {
  bool mixed = false;
  torch::Dtype low = torch::kHalf;

  /// Compute dtype for `op`, or nullopt when the op keeps its input dtype.
  std::optional<torch::Dtype> dtype_for(OpClass op) const;

  static PrecisionPolicy full() { return PrecisionPolicy{false, torch::kHalf}; }
  static PrecisionPolicy mixed_half() { return PrecisionPolicy{true, torch::kHalf}; }
};

/// Policy in effect on the calling thread (full precision by default).
const PrecisionPolicy& current_precision();

/// Installs a policy on the current thread for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionPolicy policy);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  PrecisionPolicy previous_;
};

/// Casts `x` to the dtype the current policy assigns to `op`.
torch::Tensor cast_for(OpClass op, const torch::Tensor& x);

}  // namespace burnseg
