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

#include "burnseg/geometry.hpp"

namespace burnseg {

/// CRS assigned to GeoJSON files without a `crs` member (RFC 7946 default).
inline constexpr const char* kGeoJsonDefaultCrs = "OGC:CRS84";

/// Normalizes "urn:ogc:def:crs:EPSG::32634" style names to "EPSG:32634".
std::string normalize_crs_name(const std::string& name);

/// Polygons and multipolygons from a GeoJSON file (.geojson/.json) or the
/// first feature table of a GeoPackage (.gpkg). Other geometry types are
/// skipped.
PolygonSet read_polygons(const std::filesystem::path& path);

/// Writes a GeoJSON FeatureCollection (one Polygon feature per polygon) or a
/// single-table GeoPackage, chosen by extension.
void write_polygons(const PolygonSet& set, const std::filesystem::path& path);

}  // namespace burnseg
