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


#include <torch/serialize.h>

#include "burnseg/error.hpp"
#include "burnseg/models.hpp"

namespace burnseg {

// Archive layout (torch serialize container):
//   format_version   int tensor, kCheckpointFormatVersion
//   model_config     string, ModelConfig::to_json()
//   metadata         string, caller-supplied JSON
//   param/<name>     every named parameter
//   buffer/<name>    every named buffer (batch-norm running stats)

void save_checkpoint(SegmentationModel& model, const std::string& metadata_json, const std::filesystem::path& path) {
  torch::serialize::OutputArchive archive;
  archive.write("format_version", torch::tensor(kCheckpointFormatVersion, torch::kLong));
  archive.write("model_config", c10::IValue(model.config().to_json()));
  archive.write("metadata", c10::IValue(metadata_json));
  for (const auto& item : model.named_parameters()) {
    archive.write("param/" + item.key(), item.value().detach().to(torch::kCPU));
  }
  for (const auto& item : model.named_buffers()) {
    archive.write("buffer/" + item.key(), item.value().detach().to(torch::kCPU), /*is_buffer=*/true);
  }
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  try {
    archive.save_to(path.string());
  } catch (const c10::Error& e) {
    fail(ErrorCode::kIoError, "cannot write checkpoint '" + path.string() + "': " + e.what_without_backtrace());
  }
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  require(std::filesystem::exists(path), ErrorCode::kIoError, "checkpoint '" + path.string() + "' not found");
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
  } catch (const c10::Error& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "' is not a checkpoint: " + e.what_without_backtrace());
  }
  try {
    torch::Tensor version;
    archive.read("format_version", version);
    require(version.item<std::int64_t>() == kCheckpointFormatVersion, ErrorCode::kUnsupportedFormat,
            "unsupported checkpoint version " + std::to_string(version.item<std::int64_t>()));
    c10::IValue config_value;
    c10::IValue metadata_value;
    archive.read("model_config", config_value);
    archive.read("metadata", metadata_value);

    SegmentationModel model(ModelConfig::from_json(config_value.toStringRef()));
    torch::NoGradGuard no_grad;
    for (auto& item : model.named_parameters()) {
      torch::Tensor stored;
      archive.read("param/" + item.key(), stored);
      require(stored.sizes() == item.value().sizes(), ErrorCode::kUnsupportedFormat,
              "shape mismatch for parameter '" + item.key() + "'");
      item.value().copy_(stored);
    }
    for (auto& item : model.named_buffers()) {
      torch::Tensor stored;
      archive.read("buffer/" + item.key(), stored, /*is_buffer=*/true);
      item.value().copy_(stored);
    }
    return {model, metadata_value.toStringRef()};
  } catch (const c10::Error& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what_without_backtrace());
  }
}

}  // namespace burnseg
