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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "burnseg/raster.hpp"
#include "burnseg/tta.hpp"

namespace burnseg {

/// Pixel counts with burned as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& other);
  bool operator==(const ConfusionCounts&) const = default;
};

/// Counts over pixels that are valid in both rasters: not nodata, and
/// `valid` == 1 where given. GRID_MISMATCH unless all share geometry.
ConfusionCounts confusion(const RasterGrid& pred, const RasterGrid& truth, const RasterGrid* valid = nullptr);

/// Tensor form: pred and truth hold 0/1 (truth 255 = ignore), any equal shape.
ConfusionCounts confusion(const torch::Tensor& pred, const torch::Tensor& truth);

/// 2tp / (2tp + fp + fn); 1 when tp = fp = fn = 0.
double dice(const ConfusionCounts& counts);
/// tp / (tp + fp + fn); 1 when tp = fp = fn = 0.
double iou(const ConfusionCounts& counts);

struct EvalReport {
  std::string framework;  // STL or MTL
  std::string model;      // UNet-RN34 or SegFormer-B2
  std::string technique;  // Baseline, TTA, MP, ...
  double dice = 0.0;
  double iou = 0.0;
  ConfusionCounts counts;
  double inference_minutes = 0.0;
};

struct RunLabels {
  std::string framework;
  std::string model;
  std::string technique;
};

/// Scores the binary map of `run` against `truth`; pixels where `cloud` is 1
/// are excluded.
EvalReport evaluate_run(const PredictionRun& run, const RasterGrid& truth, const RunLabels& labels,
                        const RasterGrid* cloud = nullptr);

std::string report_csv_header();
std::string report_csv_row(const EvalReport& report);
void write_report_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path);

}  // namespace burnseg
