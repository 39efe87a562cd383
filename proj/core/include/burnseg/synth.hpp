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

#include "burnseg/config.hpp"
#include "burnseg/geometry.hpp"
#include "burnseg/raster.hpp"

namespace burnseg {

/// One generated scene: 4-band imagery with dark, low-NIR burn scars over a
/// patchwork of land-cover classes, a few bright clouds, and exact labels.
struct SyntheticScene {
  std::string id;
  std::string role;
  RasterGrid image;       // uint16, bands Blue, Green, Red, NIR
  RasterGrid cloud;       // binary mask on the image grid
  RasterGrid landcover;   // land-cover codes on a coarser grid
  PolygonSet delineation; // burn scar polygons
  PolygonSet aoi;
  /// Fraction of scene pixels whose centers fall inside a scar.
  double burned_fraction = 0.0;
};

/// Deterministic in (config, seed, index).
SyntheticScene generate_scene(const SynthConfig& config, std::uint64_t seed, std::int64_t index,
                              const std::string& role);

/// Writes every scene under `directory` plus a `scenes.json` index and
/// returns the scene inputs (training scenes first).
std::vector<SceneInput> write_synthetic_dataset(const SynthConfig& config, std::uint64_t seed,
                                                const std::filesystem::path& directory);

std::vector<SceneInput> read_scene_index(const std::filesystem::path& path);

}  // namespace burnseg
