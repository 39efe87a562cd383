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


#include "oracles.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>

namespace burnseg::testing {

OracleCounts count_pixels(const std::vector<std::uint8_t>& pred, const std::vector<std::uint8_t>& truth) {
  OracleCounts c;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (truth[k] == 255) continue;
    const bool p = pred[k] == 1;
    const bool t = truth[k] == 1;
    if (p && t) ++c.tp;
    if (p && !t) ++c.fp;
    if (!p && t) ++c.fn;
    if (!p && !t) ++c.tn;
  }
  return c;
}

double oracle_dice(const OracleCounts& c) {
  const std::uint64_t d = 2 * c.tp + c.fp + c.fn;
  return d == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(d);
}

double oracle_iou(const OracleCounts& c) {
  const std::uint64_t d = c.tp + c.fp + c.fn;
  return d == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

std::pair<std::int64_t, std::int64_t> d4_source(D4 t, std::int64_t n, std::int64_t i, std::int64_t j) {
  const std::int64_t m = n - 1;
  switch (t) {
    case D4::kIdentity: return {i, j};
    case D4::kRot90: return {j, m - i};
    case D4::kRot180: return {m - i, m - j};
    case D4::kRot270: return {m - j, i};
    case D4::kHFlip: return {i, m - j};
    case D4::kVFlip: return {m - i, j};
    case D4::kTranspose: return {j, i};
    case D4::kAntiTranspose: return {m - j, m - i};
  }
  return {i, j};
}

std::pair<std::int64_t, std::int64_t> d4_target(D4 t, std::int64_t n, std::int64_t i, std::int64_t j) {
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      if (d4_source(t, n, a, b) == std::pair{i, j}) return {a, b};
    }
  }
  return {-1, -1};
}

torch::Tensor d4_apply_loop(D4 t, const torch::Tensor& x_in) {
  const torch::Tensor x = x_in.contiguous().to(torch::kDouble);
  const std::int64_t n = x.size(-1);
  const std::int64_t lead = x.numel() / (n * n);
  torch::Tensor y = torch::empty_like(x);
  const double* src = x.data_ptr<double>();
  double* dst = y.data_ptr<double>();
  for (std::int64_t l = 0; l < lead; ++l) {
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        const auto [si, sj] = d4_source(t, n, i, j);
        dst[(l * n + i) * n + j] = src[(l * n + si) * n + sj];
      }
    }
  }
  return y.to(x_in.scalar_type());
}

double oracle_binary_dice_loss(const std::vector<double>& probs, const std::vector<int>& labels, double smooth) {
  double inter = 0.0, ps = 0.0, gs = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (labels[k] == 255) continue;
    const double g = labels[k] == 1 ? 1.0 : 0.0;
    inter += probs[k] * g;
    ps += probs[k];
    gs += g;
  }
  return 1.0 - (2.0 * inter + smooth) / (ps + gs + smooth);
}

double oracle_multiclass_dice_loss(const std::vector<double>& probs, const std::vector<int>& labels,
                                   std::int64_t classes, double smooth) {
  const std::size_t n = labels.size();
  double total = 0.0;
  int present = 0;
  for (std::int64_t c = 0; c < classes; ++c) {
    double inter = 0.0, ps = 0.0, gs = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] == 255) continue;
      const double p = probs[static_cast<std::size_t>(c) * n + k];
      const double g = labels[k] == c ? 1.0 : 0.0;
      inter += p * g;
      ps += p;
      gs += g;
    }
    if (gs > 0.0) {
      total += (2.0 * inter + smooth) / (ps + gs + smooth);
      ++present;
    }
  }
  return present == 0 ? 0.0 : 1.0 - total / present;
}

RasterGrid random_raster(std::int64_t width, std::int64_t height, std::int64_t bands, std::mt19937_64& rng,
                         RasterKind kind) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(width * height * bands));
  for (float& x : v) x = u(rng);
  GeoTransform gt{1000.0, 2000.0, 1.0, 1.0, "EPSG:32634"};
  return RasterGrid(width, height, bands, gt, kind, std::move(v), std::nullopt, SampleType::kFloat32);
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("burnseg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace burnseg::testing
