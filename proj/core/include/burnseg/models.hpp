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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace burnseg {

enum class Architecture {
  kUNetResNet34,     // U-Net decoder over a ResNet-34 encoder
  kSegFormerMiTB2,   // SegFormer all-MLP decoder over a MiT-B2 encoder
};

std::string_view architecture_name(Architecture arch);
Architecture parse_architecture(std::string_view name);

struct ModelConfig {
  Architecture architecture = Architecture::kUNetResNet34;
  std::int64_t in_channels = 4;  // Blue, Green, Red, NIR
  std::int64_t num_lc_classes = 12;
  /// 1.0 reproduces the reference widths; smaller values shrink every
  /// channel count (rounded up to a multiple of 8) for CPU-scale runs.
  double width_scale = 1.0;
  bool with_lc_head = false;
  std::uint64_t init_seed = 0;

  void validate() const;
  /// Scaled channel count: ceil(channels * width_scale) rounded up to 8.
  std::int64_t scaled(std::int64_t channels) const;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);

  bool operator==(const ModelConfig&) const = default;
};

/// Encoder-decoder trunk producing the shared feature map both heads read.
class TrunkImpl : public torch::nn::Module {
 public:
  virtual torch::Tensor forward(const torch::Tensor& x) = 0;
  virtual std::int64_t out_channels() const = 0;
  /// Ratio of input size to feature-map size (1 for U-Net, 4 for SegFormer).
  virtual std::int64_t output_stride() const = 0;
};

struct ForwardOutput {
  torch::Tensor ba_logits;                  // B x 1 x H x W
  std::optional<torch::Tensor> lc_logits;   // B x num_lc_classes x H x W
};

/// Trunk plus a burned-area head and an optional land-cover head, both 1x1
/// projections of the same trunk features.
///
/// Copies share the underlying parameters (like torch module holders); use
/// `clone()` for an independent copy.
class SegmentationModel {
 public:
  /// Seeds torch's global generator with config.init_seed before
  /// constructing, so equal configs give bitwise-equal initial weights.
  explicit SegmentationModel(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  /// Validates the batch (B x in_channels x H x W, H and W multiples of 32,
  /// finite) and returns full-resolution float32 logits.
  ForwardOutput forward(const torch::Tensor& batch);

  /// Head outputs at the trunk's resolution, before any upsampling.
  ForwardOutput forward_raw(const torch::Tensor& batch);

  std::int64_t count_params() const;
  /// Parameter count of the land-cover head alone (0 without one).
  std::int64_t lc_head_params() const;

  /// Same trunk and BA head weights, land-cover head removed. Throws
  /// NO_LC_HEAD when there is none.
  SegmentationModel drop_lc_head() const;
  SegmentationModel clone() const;

  void train(bool on = true);
  void eval() { train(false); }
  bool is_training() const;
  void to(torch::Dtype dtype);

  std::vector<torch::Tensor> parameters() const;
  torch::OrderedDict<std::string, torch::Tensor> named_parameters() const;
  torch::OrderedDict<std::string, torch::Tensor> named_buffers() const;
  /// Parameters of the shared trunk only.
  std::vector<torch::Tensor> trunk_parameters() const;
  std::vector<torch::Tensor> ba_head_parameters() const;
  std::vector<torch::Tensor> lc_head_parameters() const;

  torch::nn::Module& module();

 private:
  struct Root;
  SegmentationModel(const ModelConfig& config, std::shared_ptr<Root> root);
  void copy_state_from(const SegmentationModel& other);

  ModelConfig config_;
  std::shared_ptr<Root> root_;
};

SegmentationModel build_model(const ModelConfig& config);
std::int64_t count_params(const SegmentationModel& model);
SegmentationModel drop_lc_head(const SegmentationModel& model);

/// Versioned single-file archive of named parameters, buffers, the model
/// config and free-form JSON metadata.
void save_checkpoint(SegmentationModel& model, const std::string& metadata_json,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
  SegmentationModel model;
  std::string metadata_json;
};
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

inline constexpr std::int64_t kCheckpointFormatVersion = 1;

}  // namespace burnseg
