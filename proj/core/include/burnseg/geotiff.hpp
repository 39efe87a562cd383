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
#include <optional>

#include "burnseg/raster.hpp"

namespace burnseg {

/// Reads a north-up GeoTIFF (uint8, uint16 or float32; stripped or tiled;
/// band-interleaved or pixel-interleaved).
///
/// The raster kind comes from `kind` when given, otherwise from the
/// `burnseg:kind=` image description written by `write_raster`, otherwise
/// IMAGE. The CRS is taken from the GTCitation key when present, else from
/// the EPSG projected/geographic type keys.
RasterGrid read_raster(const std::filesystem::path& path,
                       std::optional<RasterKind> kind = std::nullopt);

/// Writes a band-separate, deflate-compressed GeoTIFF. Values, transform,
/// nodata, sample type and kind survive a read_raster round trip bit-exactly.
void write_raster(const RasterGrid& raster, const std::filesystem::path& path);

}  // namespace burnseg
