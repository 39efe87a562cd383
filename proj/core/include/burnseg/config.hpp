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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "burnseg/blocksplit.hpp"
#include "burnseg/losses.hpp"
#include "burnseg/models.hpp"
#include "burnseg/patching.hpp"
#include "burnseg/trainer.hpp"
#include "burnseg/tta.hpp"

namespace burnseg {

inline constexpr int kConfigSchemaVersion = 1;

/// Inputs of one scene. Paths are absolute after loading.
struct SceneInput {
  std::string id;
  std::string role = "train";  // "train" (split into blocks) or "predict" (held out)
  std::filesystem::path image;        // 4-band GeoTIFF
  std::filesystem::path delineation;  // burned-area polygons (GeoJSON / GeoPackage)
  std::filesystem::path cloud;        // binary cloud mask GeoTIFF
  std::filesystem::path landcover;    // land-cover code GeoTIFF
  std::filesystem::path aoi;          // AOI polygons
};

/// Parameters of the synthetic scene generator. The values are arbitrary;
/// they exist to exercise the pipeline, not to imitate any sensor.
struct SynthConfig {
  std::int64_t train_scenes = 2;
  std::int64_t predict_scenes = 1;
  std::int64_t width = 256;
  std::int64_t height = 256;
  double pixel_size = 1.5;
  double lc_pixel_size = 10.0;
  double burned_fraction_min = 0.10;
  double burned_fraction_max = 0.35;
  std::int64_t max_clouds = 2;
  std::string crs = "EPSG:32634";
  double origin_x = 500000.0;
  double origin_y = 4200000.0;

  void validate() const;
};

struct PrepareConfig {
  /// Empty: use the scenes listed by a previous `synth` run.
  std::vector<SceneInput> scenes;
  std::int64_t patch_size = 512;
  double train_overlap = 0.0;
  double predict_overlap = 0.2;
  double image_nodata = 0.0;
};

struct SplitConfig {
  double block_size = 2000.0;
  SplitFractions fractions = kDefaultSplitFractions;
};

struct PredictConfig {
  TtaConfig tta;
  bool mixed_precision = false;
  std::int64_t batch_size = 8;
  /// Empty: <run_dir>/train/best.ckpt.
  std::filesystem::path checkpoint;
};

struct EvaluateConfig {
  /// Empty: derived from the prediction settings (Baseline, TTA, MP, TTA+MP).
  std::string technique;
};

struct PipelineConfig {
  int schema_version = kConfigSchemaVersion;
  std::filesystem::path run_dir;
  std::uint64_t seed = 0;
  SynthConfig synth;
  PrepareConfig prepare;
  SplitConfig split;
  ModelConfig model;
  Framework framework = Framework::kSTL;
  TrainConfig train;
  LossConfig loss;
  PredictConfig predict;
  EvaluateConfig evaluate;

  /// Parses JSON text; relative paths resolve against `base_dir`. Unknown
  /// keys and bad values raise BAD_CONFIG. Training and loss defaults follow
  /// the chosen architecture; the seed feeds the generator, the split, model
  /// initialization and training.
  static PipelineConfig parse(const std::string& text, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Overrides the seed everywhere it is used.
  void set_seed(std::uint64_t value);
  void validate() const;

  /// Canonical JSON of the effective configuration.
  std::string to_json() const;
  /// Hex SHA-256 of to_json().
  std::string hash() const;
};

std::string sha256_hex(const std::string& bytes);

}  // namespace burnseg
