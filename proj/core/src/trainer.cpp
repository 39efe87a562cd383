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


#include "burnseg/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "burnseg/augment.hpp"
#include "burnseg/blocksplit.hpp"
#include "burnseg/error.hpp"
#include "burnseg/metrics.hpp"
#include "burnseg/precision.hpp"

namespace burnseg {

using torch::Tensor;

void TrainConfig::validate() const {
  require(batch_size >= 1, ErrorCode::kBadConfig, "batch_size must be >= 1");
  require(learning_rate > 0.0, ErrorCode::kBadConfig, "learning_rate must be > 0");
  require(weight_decay >= 0.0, ErrorCode::kBadConfig, "weight_decay must be >= 0");
  require(epochs >= 1, ErrorCode::kBadConfig, "epochs must be >= 1");
  require(aug_probability >= 0.0 && aug_probability <= 1.0, ErrorCode::kBadConfig,
          "aug_probability must lie in [0, 1]");
  scaler.validate();
}

TrainConfig TrainConfig::defaults_for(Architecture arch) {
  TrainConfig c;
  c.learning_rate = arch == Architecture::kSegFormerMiTB2 ? 6e-5 : 1e-4;
  return c;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Batch {
  Tensor images;
  Tensor ba;
  std::optional<Tensor> lc;
};

Batch make_batch(const TrainingSet& data, const std::vector<std::int64_t>& order, std::size_t begin, std::size_t end,
                 double p, std::mt19937_64& rng) {
  std::vector<Tensor> xs;
  std::vector<Tensor> ys;
  std::vector<Tensor> ls;
  for (std::size_t k = begin; k < end; ++k) {
    const std::int64_t i = order[k];
    Sample s{data.images[i], data.ba[i], data.lc ? std::optional<Tensor>((*data.lc)[i]) : std::nullopt};
    s = augment(s, p, rng);
    xs.push_back(s.image);
    ys.push_back(s.ba);
    if (s.lc) {
      ls.push_back(*s.lc);
    }
  }
  Batch b{torch::stack(xs), torch::stack(ys), std::nullopt};
  if (!ls.empty()) {
    b.lc = torch::stack(ls);
  }
  return b;
}

void check_dataset(const TrainingSet& data, const char* name, Framework framework) {
  require(data.size() > 0, ErrorCode::kEmptyDataset, std::string(name) + " set is empty");
  require(data.ba.defined() && data.ba.size(0) == data.size(), ErrorCode::kShapeError,
          std::string(name) + " set labels do not match its images");
  if (framework == Framework::kMTL) {
    require(data.lc.has_value(), ErrorCode::kMissingLc, std::string(name) + " set has no land-cover labels");
  }
}

}  // namespace

EpochRecord evaluate_set(SegmentationModel& model, const BandStats& stats, const TrainingSet& data,
                         const LossConfig& loss_config, Framework framework, std::int64_t batch_size,
                         bool mixed_precision) {
  const bool was_training = model.is_training();
  model.eval();
  torch::NoGradGuard no_grad;
  const PrecisionScope scope(mixed_precision ? PrecisionPolicy::mixed_half() : PrecisionPolicy::full());
  ConfusionCounts counts;
  double loss_sum = 0.0;
  std::int64_t batches = 0;
  for (std::int64_t begin = 0; begin < data.size(); begin += batch_size) {
    const std::int64_t end = std::min(begin + batch_size, data.size());
    const Tensor x = stats.normalize(data.images.slice(0, begin, end));
    const Tensor y = data.ba.slice(0, begin, end);
    std::optional<Tensor> y_lc;
    if (data.lc) {
      y_lc = data.lc->slice(0, begin, end);
    }
    const ForwardOutput out = model.forward(x);
    const LossTerms terms = combined_loss(out.ba_logits, out.lc_logits, y, y_lc, loss_config, framework);
    loss_sum += terms.total.item<double>();
    ++batches;
    counts += confusion(torch::sigmoid(out.ba_logits.select(1, 0)).ge(0.5), y);
  }
  model.train(was_training);
  EpochRecord r;
  r.split = "val";
  r.dice = dice(counts);
  r.iou = iou(counts);
  r.loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0.0;
  return r;
}

TrainResult train(SegmentationModel& model, const TrainingSet& train_set, const TrainingSet& val_set,
                  const TrainConfig& cfg, const LossConfig& loss_config, Framework framework,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  loss_config.validate();
  check_dataset(train_set, "training", framework);
  check_dataset(val_set, "validation", framework);
  if (framework == Framework::kMTL) {
    require(model.config().with_lc_head, ErrorCode::kMissingLc, "MTL training needs a model with a land-cover head");
  }

  torch::manual_seed(cfg.seed);
  const BandStats stats = compute_band_stats(train_set.images);
  std::vector<Tensor> params = model.parameters();
  torch::optim::AdamW optimizer(params,
                                torch::optim::AdamWOptions(cfg.learning_rate).weight_decay(cfg.weight_decay));
  LossScaler scaler(cfg.scaler);
  std::mt19937_64 rng(cfg.seed);

  TrainResult result{model.clone(), 0, -1.0, stats, {}, 0, 0.0};
  const auto n = static_cast<std::size_t>(train_set.size());
  const auto step = static_cast<std::size_t>(cfg.batch_size);
  std::vector<std::int64_t> order(n);

  for (std::int64_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    model.train();
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(bounded_draw(rng, i))]);
    }

    ConfusionCounts counts;
    double loss_sum = 0.0;
    std::int64_t batches = 0;
    for (std::size_t begin = 0; begin < n; begin += step) {
      const std::size_t end = std::min(begin + step, n);
      if (end - begin == 1 && n > 1) {
        continue;
      }
      const Batch batch = make_batch(train_set, order, begin, end, cfg.aug_probability, rng);
      const Tensor x = stats.normalize(batch.images);

      optimizer.zero_grad();
      Tensor loss;
      bool applied = true;
      {
        const PrecisionScope scope(cfg.mixed_precision ? PrecisionPolicy::mixed_half() : PrecisionPolicy::full());
        const ForwardOutput out = model.forward(x);
        const LossTerms terms = combined_loss(out.ba_logits, out.lc_logits, batch.ba, batch.lc, loss_config, framework);
        loss = terms.total;
        {
          torch::NoGradGuard no_grad;
          counts += confusion(torch::sigmoid(out.ba_logits.select(1, 0)).ge(0.5), batch.ba);
        }
        if (cfg.mixed_precision) {
          applied = scaled_backward(loss, scaler, params);
          if (scaler.skips_at_min_scale() >= 3) {
            fail(ErrorCode::kNanLoss, "three consecutive non-finite steps at minimum loss scale (epoch " +
                                          std::to_string(epoch) + ", loss " + std::to_string(loss.item<double>()) +
                                          ")");
          }
        } else {
          require(std::isfinite(loss.item<double>()), ErrorCode::kNanLoss,
                  "non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batches + 1));
          loss.backward();
        }
      }
      if (applied) {
        optimizer.step();
      }
      if (std::isfinite(loss.item<double>())) {
        loss_sum += loss.item<double>();
      }
      ++batches;
    }

    EpochRecord train_record;
    train_record.epoch = epoch;
    train_record.split = "train";
    train_record.dice = dice(counts);
    train_record.iou = iou(counts);
    train_record.loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0.0;
    train_record.seconds = seconds_since(start);

    const auto val_start = std::chrono::steady_clock::now();
    EpochRecord val_record =
        evaluate_set(model, stats, val_set, loss_config, framework, cfg.batch_size, cfg.mixed_precision);
    val_record.epoch = epoch;
    val_record.seconds = seconds_since(val_start);

    result.history.push_back(train_record);
    result.history.push_back(val_record);
    if (on_epoch) {
      on_epoch(train_record);
      on_epoch(val_record);
    }
    if (val_record.dice >= result.best_val_dice) {
      result.best_val_dice = val_record.dice;
      result.best_epoch = epoch;
      result.best_model = model.clone();
    }
  }
  result.best_model.eval();
  result.skipped_steps = scaler.total_skipped();
  result.final_loss_scale = scaler.scale();
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,split,dice,iou,loss,seconds\n";
  char line[256];
  for (const EpochRecord& r : history) {
    std::snprintf(line, sizeof line, "%lld,%s,%.6f,%.6f,%.6f,%.3f\n", static_cast<long long>(r.epoch),
                  r.split.c_str(), r.dice, r.iou, r.loss, r.seconds);
    out += line;
  }
  return out;
}

void write_history_csv(const std::vector<EpochRecord>& history, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << history_csv(history);
}

}  // namespace burnseg
