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


// burnseg command-line tool.
//
//   burnseg <synth|prepare|split|train|predict|evaluate> --config PATH [--seed N]
//
// Exit codes: 0 success, 2 pipeline error (stderr line "error: <CATEGORY>: ..."),
// 1 usage or unexpected failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "burnseg/error.hpp"
#include "burnseg/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Burned-area segmentation pipeline", "burnseg"};
  app.set_version_flag("--version", burnseg::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, const char*> commands[] = {
      {"synth", "generate a synthetic scene dataset"},
      {"prepare", "clip, label and patch the input scenes"},
      {"split", "assign patches to train/val/test by spatial block"},
      {"train", "train the configured model and keep the best checkpoint"},
      {"predict", "mosaic (TTA) probability and binary maps for predict scenes"},
      {"evaluate", "score predictions and write the report CSV"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "pipeline config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    burnseg::PipelineConfig config = burnseg::PipelineConfig::load(config_path);
    if (seed) {
      config.set_seed(*seed);
    }
    burnseg::run_command(command, config);
  } catch (const burnseg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
