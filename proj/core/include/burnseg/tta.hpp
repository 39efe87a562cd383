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

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "burnseg/dataset.hpp"
#include "burnseg/models.hpp"
#include "burnseg/patching.hpp"
#include "burnseg/raster.hpp"
#include "burnseg/transforms.hpp"

namespace burnseg {

struct TtaConfig {
  std::vector<D4> transforms = {kAllD4.begin(), kAllD4.end()};
  bool enabled = true;
  double threshold = 0.5;

  /// Identity present when enabled, no duplicates, threshold in (0, 1).
  void validate() const;
  /// Transforms actually run: the configured list, or {identity} when off.
  std::vector<D4> active() const;
};

/// Maps a B x C x H x W batch to B x 1 x H x W burned probabilities and
/// counts per-sample invocations. Copies share the counter.
class Predictor {
 public:
  using Fn = std::function<torch::Tensor(const torch::Tensor&)>;

  explicit Predictor(Fn fn);

  torch::Tensor operator()(const torch::Tensor& batch) const;
  std::int64_t invocations() const { return count_->load(); }
  void reset_invocations() const { count_->store(0); }

 private:
  Fn fn_;
  std::shared_ptr<std::atomic<std::int64_t>> count_;
};

/// Normalizes with `stats`, runs the BA head in eval mode (mixed precision
/// when asked) and applies a sigmoid. The land-cover head is never evaluated.
Predictor model_predictor(SegmentationModel model, BandStats stats, bool mixed_precision);

/// Probability map H x W for one C x H x W patch: for each transform t,
/// inverse(t)(predict(t(patch))), summed in double in list order and divided
/// by the transform count.
torch::Tensor tta_predict(const Predictor& predict, const torch::Tensor& patch, const TtaConfig& config);

/// Batched form: B x C x H x W in, B x H x W out; one predictor call per
/// transform covering the whole batch.
torch::Tensor tta_predict_batch(const Predictor& predict, const torch::Tensor& batch, const TtaConfig& config);

struct PredictionRun {
  RasterGrid probability_map;
  RasterGrid binary_map;
  double wall_clock_seconds = 0.0;
  std::int64_t patches_processed = 0;
  std::int64_t model_invocations = 0;
  TtaConfig tta;
  bool mixed_precision = false;
};

/// probability >= threshold -> 1, nodata preserved.
RasterGrid threshold_map(const RasterGrid& probability, double threshold);

/// Predicts every patch (TTA when enabled), mosaics and thresholds. A first
/// warm-up batch is run untimed and uncounted; the clock covers prediction,
/// TTA and mosaicking. Pixels whose image bands are all nodata stay nodata.
PredictionRun predict_scene(const Predictor& predict, const PatchSet& images, const TtaConfig& tta,
                            std::int64_t batch_size = 8, bool mixed_precision = false);

PredictionRun predict_scene(const SegmentationModel& model, const BandStats& stats, const PatchSet& images,
                            const TtaConfig& tta, bool mixed_precision, std::int64_t batch_size = 8);

/// JSON run metadata (timings, counts, TTA config).
std::string prediction_report_json(const PredictionRun& run);

}  // namespace burnseg
