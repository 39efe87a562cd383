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

#include "burnseg/precision.hpp"

namespace burnseg {

namespace {
thread_local PrecisionPolicy g_policy = PrecisionPolicy::full();
}  // namespace

std::string_view op_class_name(OpClass op) {
  switch (op) {
    case OpClass::kConvolution: return "convolution";
    case OpClass::kLinear: return "linear";
    case OpClass::kMatMul: return "matmul";
    case OpClass::kNormalization: return "normalization";
    case OpClass::kSoftmax: return "softmax";
    case OpClass::kInterpolation: return "interpolation";
    case OpClass::kReduction: return "reduction";
    case OpClass::kLoss: return "loss";
    case OpClass::kActivation: return "activation";
  }
  return "unknown";
}

std::optional<torch::Dtype> PrecisionPolicy::dtype_for(OpClass op) const {
  switch (op) {
    case OpClass::kConvolution:
    case OpClass::kLinear:
    case OpClass::kMatMul:
      return mixed ? low : torch::kFloat;
    case OpClass::kNormalization:
    case OpClass::kSoftmax:
    case OpClass::kInterpolation:
    case OpClass::kReduction:
    case OpClass::kLoss:
      return torch::kFloat;
    case OpClass::kActivation:
      return std::nullopt;
  }
  return std::nullopt;
}

const PrecisionPolicy& current_precision() { return g_policy; }

PrecisionScope::PrecisionScope(PrecisionPolicy policy) : previous_(g_policy) { g_policy = policy; }

PrecisionScope::~PrecisionScope() { g_policy = previous_; }

torch::Tensor cast_for(OpClass op, const torch::Tensor& x) {
  const auto dtype = g_policy.dtype_for(op);
  // Double inputs are left alone so gradient checks can run in float64.
  if (!dtype || x.scalar_type() == *dtype || x.scalar_type() == torch::kDouble) {
    return x;
  }
  return x.to(*dtype);
}

}  // namespace burnseg
