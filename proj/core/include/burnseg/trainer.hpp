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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "burnseg/dataset.hpp"
#include "burnseg/loss_scaler.hpp"
#include "burnseg/losses.hpp"
#include "burnseg/models.hpp"

namespace burnseg {

struct TrainConfig {
  std::int64_t batch_size = 8;
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  std::int64_t epochs = 20;
  double aug_probability = 0.5;
  std::uint64_t seed = 0;
  bool mixed_precision = false;
  LossScalerConfig scaler;

  void validate() const;
  /// Learning rate 1e-4 for UNET_RN34, 6e-5 for SEGFORMER_B2.
  static TrainConfig defaults_for(Architecture arch);
};

struct EpochRecord {
  std::int64_t epoch = 0;  // 1-based
  std::string split;       // "train" or "val"
  double dice = 0.0;
  double iou = 0.0;
  double loss = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  SegmentationModel best_model;
  std::int64_t best_epoch = 0;
  double best_val_dice = 0.0;
  BandStats stats;
  std::vector<EpochRecord> history;
  std::int64_t skipped_steps = 0;
  double final_loss_scale = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minimizes the STL or MTL loss with AdamW (constant rate). Inputs are
/// normalized with band statistics of the training set. Each epoch visits the
/// training set in a seeded shuffled order, augments every sample, then
/// scores the validation set; the model with the highest validation Dice is
/// kept (ties go to the later epoch). A trailing batch of one sample is
/// skipped so batch normalization always sees at least two.
///
/// Throws EMPTY_DATASET, MISSING_LC (MTL without LC labels or head) and
/// NAN_LOSS (non-finite full-precision loss, or three consecutive skipped
/// mixed-precision steps at the minimum loss scale).
TrainResult train(SegmentationModel& model, const TrainingSet& train_set, const TrainingSet& val_set,
                  const TrainConfig& train_config, const LossConfig& loss_config, Framework framework,
                  const EpochCallback& on_epoch = {});

/// Dice/IoU/loss of `model` on `data` in eval mode.
EpochRecord evaluate_set(SegmentationModel& model, const BandStats& stats, const TrainingSet& data,
                         const LossConfig& loss_config, Framework framework, std::int64_t batch_size,
                         bool mixed_precision);

std::string history_csv(const std::vector<EpochRecord>& history);
void write_history_csv(const std::vector<EpochRecord>& history, const std::filesystem::path& path);

}  // namespace burnseg
