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


#include "burnseg/metrics.hpp"

#include <cstdio>
#include <fstream>

#include "burnseg/error.hpp"

namespace burnseg {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ConfusionCounts confusion(const RasterGrid& pred, const RasterGrid& truth, const RasterGrid* valid) {
  require(pred.same_geometry(truth), ErrorCode::kGridMismatch, "prediction and truth grids differ");
  require(valid == nullptr || valid->same_geometry(truth), ErrorCode::kGridMismatch,
          "valid mask grid differs from truth");
  ConfusionCounts c;
  const auto p = pred.band(0);
  const auto t = truth.band(0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (pred.is_nodata(p[k]) || truth.is_nodata(t[k])) {
      continue;
    }
    if (valid != nullptr && valid->band(0)[k] != 1.0f) {
      continue;
    }
    const bool pb = p[k] == 1.0f;
    const bool tb = t[k] == 1.0f;
    if (pb && tb) {
      ++c.tp;
    } else if (pb) {
      ++c.fp;
    } else if (tb) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

ConfusionCounts confusion(const torch::Tensor& pred, const torch::Tensor& truth) {
  require(pred.sizes() == truth.sizes(), ErrorCode::kShapeError, "prediction and truth shapes differ");
  const torch::Tensor t = truth.to(torch::kLong);
  const torch::Tensor valid = t.ne(255);
  const torch::Tensor pb = pred.to(torch::kLong).eq(1).logical_and(valid);
  const torch::Tensor tb = t.eq(1).logical_and(valid);
  ConfusionCounts c;
  c.tp = static_cast<std::uint64_t>(pb.logical_and(tb).sum().item<std::int64_t>());
  c.fp = static_cast<std::uint64_t>(pb.logical_and(tb.logical_not()).sum().item<std::int64_t>());
  c.fn = static_cast<std::uint64_t>(tb.logical_and(pb.logical_not()).sum().item<std::int64_t>());
  c.tn = static_cast<std::uint64_t>(valid.sum().item<std::int64_t>()) - c.tp - c.fp - c.fn;
  return c;
}

double dice(const ConfusionCounts& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

double iou(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

EvalReport evaluate_run(const PredictionRun& run, const RasterGrid& truth, const RunLabels& labels,
                        const RasterGrid* cloud) {
  std::optional<RasterGrid> valid;
  if (cloud != nullptr) {
    require(cloud->same_geometry(truth), ErrorCode::kGridMismatch, "cloud mask grid differs from truth");
    std::vector<float> v(static_cast<std::size_t>(cloud->pixel_count()));
    const auto c = cloud->band(0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = c[k] == 1.0f ? 0.0f : 1.0f;
    }
    valid.emplace(cloud->width(), cloud->height(), 1, cloud->transform(), RasterKind::kBinaryMask, std::move(v));
  }
  EvalReport r;
  r.framework = labels.framework;
  r.model = labels.model;
  r.technique = labels.technique;
  r.counts = confusion(run.binary_map, truth, valid ? &*valid : nullptr);
  r.dice = dice(r.counts);
  r.iou = iou(r.counts);
  r.inference_minutes = run.wall_clock_seconds / 60.0;
  return r;
}

std::string report_csv_header() { return "Framework,Model,Technique,Dice,IoU,Inference Time (min),TP,FP,FN,TN"; }

std::string report_csv_row(const EvalReport& r) {
  char numbers[160];
  std::snprintf(numbers, sizeof numbers, "%.6f,%.6f,%.6f", r.dice, r.iou, r.inference_minutes);
  return r.framework + "," + r.model + "," + r.technique + "," + numbers + "," + std::to_string(r.counts.tp) + "," +
         std::to_string(r.counts.fp) + "," + std::to_string(r.counts.fn) + "," + std::to_string(r.counts.tn);
}

void write_report_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << report_csv_header() << "\n";
  for (const EvalReport& r : reports) {
    out << report_csv_row(r) << "\n";
  }
}

}  // namespace burnseg
