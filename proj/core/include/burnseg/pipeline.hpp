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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "burnseg/config.hpp"
#include "burnseg/metrics.hpp"
#include "burnseg/trainer.hpp"
#include "burnseg/tta.hpp"

namespace burnseg {

/// Library version recorded in run manifests.
std::string tool_version();

/// Run directory layout:
///   manifest.json                 tool version, config hash, stage outputs
///   synth/                        generated scenes + scenes.json
///   prepared/index.json           prepared scenes and patch specs
///   prepared/<id>/                clipped rasters, aoi.geojson, patch sets
///   split/split.json, balance.csv
///   train/best.ckpt, history.csv, summary.json
///   predict/<id>/probability.tif, binary.tif, report.json
///   evaluate/report.csv

std::vector<SceneInput> cmd_synth(const PipelineConfig& config);
void cmd_prepare(const PipelineConfig& config);
std::vector<SplitAssignment> cmd_split(const PipelineConfig& config);
TrainResult cmd_train(const PipelineConfig& config);
std::vector<PredictionRun> cmd_predict(const PipelineConfig& config);
std::vector<EvalReport> cmd_evaluate(const PipelineConfig& config);

/// Dispatches by command name ("synth", "prepare", "split", "train",
/// "predict", "evaluate"); BAD_CONFIG for anything else.
void run_command(std::string_view command, const PipelineConfig& config);

/// Display name used in reports, e.g. "UNet-RN34".
std::string model_display_name(Architecture arch);

}  // namespace burnseg
