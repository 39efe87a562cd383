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


#include "mp_parity.hpp"

#include <optional>
#include <vector>

#include "burnseg/losses.hpp"
#include "burnseg/loss_scaler.hpp"
#include "burnseg/models.hpp"
#include "burnseg/precision.hpp"

namespace burnseg::testing {

namespace {

torch::Tensor flat_grads(const std::vector<torch::Tensor>& params) {
  std::vector<torch::Tensor> g;
  for (const auto& p : params) g.push_back(p.grad().detach().flatten().to(torch::kDouble).clone());
  return torch::cat(g);
}

void clear_grads(std::vector<torch::Tensor>& params) {
  for (auto& p : params) {
    if (p.grad().defined()) p.mutable_grad().zero_();
  }
}

}  // namespace

ParityResult unet_mp_parity(double scale, std::uint64_t seed) {
  ModelConfig c;
  c.width_scale = 0.1;
  c.init_seed = seed;
  SegmentationModel m(c);
  m.eval();
  torch::manual_seed(seed + 1);
  const torch::Tensor x = torch::randn({4, 4, 64, 64});
  const torch::Tensor y = torch::rand({4, 64, 64}).gt(0.6).to(torch::kUInt8);
  std::vector<torch::Tensor> params = m.parameters();
  auto run = [&](bool mixed) {
    clear_grads(params);
    const PrecisionScope scope(mixed ? PrecisionPolicy::mixed_half() : PrecisionPolicy::full());
    const torch::Tensor loss =
        combined_loss(m.forward(x).ba_logits, std::nullopt, y, std::nullopt, {}, Framework::kSTL).total;
    bool ok = true;
    if (mixed) {
      LossScalerConfig cfg;
      cfg.init_scale = scale;
      LossScaler scaler(cfg);
      ok = scaled_backward(loss, scaler, params);
    } else {
      loss.backward();
    }
    return std::make_pair(flat_grads(params), ok);
  };
  const auto [full, full_ok] = run(false);
  const auto [mixed, mixed_ok] = run(true);
  ParityResult r;
  r.finite = full_ok && mixed_ok && torch::isfinite(mixed).all().item<bool>();
  r.relative_error = ((mixed - full).norm() / full.norm()).item<double>();
  return r;
}

}  // namespace burnseg::testing
