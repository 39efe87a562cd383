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


#include "burnseg/tta.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "burnseg/error.hpp"
#include "burnseg/precision.hpp"
#include "json.hpp"

namespace burnseg {

using torch::Tensor;

void TtaConfig::validate() const {
  require(threshold > 0.0 && threshold < 1.0, ErrorCode::kBadConfig, "threshold must lie in (0, 1)");
  if (!enabled) {
    return;
  }
  require(!transforms.empty(), ErrorCode::kBadConfig, "TTA needs at least one transform");
  require(std::find(transforms.begin(), transforms.end(), D4::kIdentity) != transforms.end(), ErrorCode::kBadConfig,
          "TTA transforms must include identity");
  const std::set<D4> unique(transforms.begin(), transforms.end());
  require(unique.size() == transforms.size(), ErrorCode::kBadConfig, "duplicate TTA transform");
}

std::vector<D4> TtaConfig::active() const {
  return enabled ? transforms : std::vector<D4>{D4::kIdentity};
}

Predictor::Predictor(Fn fn) : fn_(std::move(fn)), count_(std::make_shared<std::atomic<std::int64_t>>(0)) {}

Tensor Predictor::operator()(const Tensor& batch) const {
  count_->fetch_add(batch.size(0));
  return fn_(batch);
}

Predictor model_predictor(SegmentationModel model, BandStats stats, bool mixed_precision) {
  model.eval();
  return Predictor([model, stats, mixed_precision](const Tensor& batch) mutable {
    torch::NoGradGuard no_grad;
    const PrecisionScope scope(mixed_precision ? PrecisionPolicy::mixed_half() : PrecisionPolicy::full());
    const Tensor x = stats.empty() ? batch : stats.normalize(batch);
    const Tensor logits = model.forward(x).ba_logits;
    return torch::sigmoid(cast_for(OpClass::kActivation, logits).to(torch::kFloat));
  });
}

Tensor tta_predict_batch(const Predictor& predict, const Tensor& batch, const TtaConfig& config) {
  config.validate();
  require(batch.dim() == 4, ErrorCode::kShapeError, "expected a B x C x H x W batch");
  const std::vector<D4> transforms = config.active();
  const bool square = batch.size(2) == batch.size(3);
  Tensor sum;
  for (D4 t : transforms) {
    require(square || !swaps_axes(t), ErrorCode::kNonSquare,
            std::string(transform_name(t)) + " needs square patches");
    const Tensor probs = predict(apply_transform(t, batch));
    require(probs.dim() == 4 && probs.size(1) == 1, ErrorCode::kShapeError, "predictor must return B x 1 x H x W");
    const Tensor back = invert_transform(t, probs.select(1, 0)).to(torch::kDouble);
    sum = sum.defined() ? sum + back : back;
  }
  return (sum / static_cast<double>(transforms.size())).to(torch::kFloat);
}

Tensor tta_predict(const Predictor& predict, const Tensor& patch, const TtaConfig& config) {
  require(patch.dim() == 3, ErrorCode::kShapeError, "expected a C x H x W patch");
  return tta_predict_batch(predict, patch.unsqueeze(0), config)[0];
}

RasterGrid threshold_map(const RasterGrid& probability, double threshold) {
  const auto p = probability.band(0);
  std::vector<float> out(p.size());
  bool any_nodata = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (probability.is_nodata(p[k])) {
      out[k] = static_cast<float>(kMaskNodata);
      any_nodata = true;
    } else {
      out[k] = static_cast<double>(p[k]) >= threshold ? 1.0f : 0.0f;
    }
  }
  return RasterGrid(probability.width(), probability.height(), 1, probability.transform(), RasterKind::kBinaryMask,
                    std::move(out), any_nodata ? std::optional<double>(kMaskNodata) : std::nullopt,
                    SampleType::kUInt8);
}

namespace {

Tensor stack_patches(const PatchSet& images, std::size_t begin, std::size_t end) {
  std::vector<Tensor> xs;
  for (std::size_t i = begin; i < end; ++i) {
    xs.push_back(raster_to_tensor(images.patches[i]));
  }
  return torch::stack(xs);
}

RasterGrid probability_patch(const RasterGrid& image, const Tensor& probs) {
  const Tensor c = probs.contiguous();
  std::vector<float> values(c.data_ptr<float>(), c.data_ptr<float>() + c.numel());
  bool masked = false;
  if (image.nodata()) {
    for (std::int64_t r = 0; r < image.height(); ++r) {
      for (std::int64_t col = 0; col < image.width(); ++col) {
        if (image.pixel_is_nodata(r, col)) {
          values[static_cast<std::size_t>(r * image.width() + col)] = static_cast<float>(kMaskNodata);
          masked = true;
        }
      }
    }
  }
  return RasterGrid(image.width(), image.height(), 1, image.transform(), RasterKind::kProbabilityMap,
                    std::move(values), masked ? std::optional<double>(kMaskNodata) : std::nullopt,
                    SampleType::kFloat32);
}

}  // namespace

PredictionRun predict_scene(const Predictor& predict, const PatchSet& images, const TtaConfig& tta,
                            std::int64_t batch_size, bool mixed_precision) {
  tta.validate();
  require(!images.patches.empty(), ErrorCode::kEmptySet, "no patches to predict");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch size must be >= 1");
  const std::size_t n = images.size();
  const std::size_t step = static_cast<std::size_t>(batch_size);

  // Warm-up on the first batch, identity only.
  predict(stack_patches(images, 0, std::min(step, n)));
  predict.reset_invocations();

  const auto start = std::chrono::steady_clock::now();
  std::vector<RasterGrid> probs;
  probs.reserve(n);
  for (std::size_t begin = 0; begin < n; begin += step) {
    const std::size_t end = std::min(begin + step, n);
    const Tensor p = tta_predict_batch(predict, stack_patches(images, begin, end), tta);
    for (std::size_t i = begin; i < end; ++i) {
      probs.push_back(probability_patch(images.patches[i], p[static_cast<std::int64_t>(i - begin)]));
    }
  }
  RasterGrid probability = mosaic(with_patches(images, std::move(probs)));
  const auto stop = std::chrono::steady_clock::now();

  PredictionRun run{probability, threshold_map(probability, tta.threshold),
                    std::chrono::duration<double>(stop - start).count(), static_cast<std::int64_t>(n),
                    predict.invocations(), tta, mixed_precision};
  return run;
}

PredictionRun predict_scene(const SegmentationModel& model, const BandStats& stats, const PatchSet& images,
                            const TtaConfig& tta, bool mixed_precision, std::int64_t batch_size) {
  require(images.patches.empty() || images.patches.front().bands() == model.config().in_channels,
          ErrorCode::kShapeError, "patch band count does not match the model's input channels");
  return predict_scene(model_predictor(model, stats, mixed_precision), images, tta, batch_size, mixed_precision);
}

std::string prediction_report_json(const PredictionRun& run) {
  std::vector<std::string> names;
  for (D4 t : run.tta.active()) {
    names.emplace_back(transform_name(t));
  }
  const nlohmann::json j = {
      {"wall_clock_seconds", run.wall_clock_seconds},
      {"inference_minutes", run.wall_clock_seconds / 60.0},
      {"patches_processed", run.patches_processed},
      {"model_invocations", run.model_invocations},
      {"invocations_per_patch",
       run.patches_processed > 0 ? static_cast<double>(run.model_invocations) / static_cast<double>(run.patches_processed)
                                 : 0.0},
      {"tta_enabled", run.tta.enabled},
      {"transforms", names},
      {"threshold", run.tta.threshold},
      {"mixed_precision", run.mixed_precision},
      {"width", run.probability_map.width()},
      {"height", run.probability_map.height()}};
  return j.dump(1);
}

}  // namespace burnseg
