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

#include "burnseg/geotiff.hpp"

#include <tiffio.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "burnseg/error.hpp"

namespace burnseg {

namespace {

constexpr ttag_t kModelPixelScaleTag = 33550;
constexpr ttag_t kModelTiepointTag = 33922;
constexpr ttag_t kGeoKeyDirectoryTag = 34735;
constexpr ttag_t kGeoDoubleParamsTag = 34736;
constexpr ttag_t kGeoAsciiParamsTag = 34737;

constexpr std::uint16_t kGTModelTypeGeoKey = 1024;
constexpr std::uint16_t kGTRasterTypeGeoKey = 1025;
constexpr std::uint16_t kGTCitationGeoKey = 1026;
constexpr std::uint16_t kGeographicTypeGeoKey = 2048;
constexpr std::uint16_t kProjectedCSTypeGeoKey = 3072;

constexpr const char* kKindPrefix = "burnseg:kind=";

const TIFFFieldInfo kGeoFields[] = {
    {kModelPixelScaleTag, TIFF_VARIABLE, TIFF_VARIABLE, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1,
     const_cast<char*>("ModelPixelScaleTag")},
    {kModelTiepointTag, TIFF_VARIABLE, TIFF_VARIABLE, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1,
     const_cast<char*>("ModelTiepointTag")},
    {kGeoKeyDirectoryTag, TIFF_VARIABLE, TIFF_VARIABLE, TIFF_SHORT, FIELD_CUSTOM, 1, 1,
     const_cast<char*>("GeoKeyDirectoryTag")},
    {kGeoDoubleParamsTag, TIFF_VARIABLE, TIFF_VARIABLE, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1,
     const_cast<char*>("GeoDoubleParamsTag")},
    {kGeoAsciiParamsTag, -1, -1, TIFF_ASCII, FIELD_CUSTOM, 1, 0,
     const_cast<char*>("GeoAsciiParamsTag")},
    {TIFFTAG_GDAL_NODATA, -1, -1, TIFF_ASCII, FIELD_CUSTOM, 1, 0,
     const_cast<char*>("GDALNoDataValue")},
};

TIFFExtendProc g_parent_extender = nullptr;

void geotiff_extender(TIFF* tif) {
  for (const TIFFFieldInfo& info : kGeoFields) {
    if (TIFFFindField(tif, info.field_tag, TIFF_ANY) == nullptr) {
      TIFFMergeFieldInfo(tif, &info, 1);
    }
  }
  if (g_parent_extender) {
    g_parent_extender(tif);
  }
}

void register_geotiff_tags() {
  static std::once_flag once;
  std::call_once(once, [] {
    g_parent_extender = TIFFSetTagExtender(geotiff_extender);
    // Silence libtiff's stderr chatter; failures surface as IO_ERROR.
    TIFFSetWarningHandler(nullptr);
  });
}

struct TiffCloser {
  void operator()(TIFF* tif) const {
    if (tif) TIFFClose(tif);
  }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

TiffPtr open_tiff(const std::filesystem::path& path, const char* mode) {
  register_geotiff_tags();
  TiffPtr tif(TIFFOpen(path.c_str(), mode));
  require(tif != nullptr, ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return tif;
}

std::string format_nodata(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string crs_to_epsg_key(const std::string& crs_id, std::uint16_t& key, std::uint16_t& code) {
  key = 0;
  code = 0;
  constexpr std::string_view prefix = "EPSG:";
  if (crs_id.rfind(prefix, 0) == 0) {
    const long value = std::strtol(crs_id.c_str() + prefix.size(), nullptr, 10);
    if (value > 0 && value < 65535) {
      code = static_cast<std::uint16_t>(value);
      key = (value >= 4000 && value < 5000) ? kGeographicTypeGeoKey : kProjectedCSTypeGeoKey;
    }
  }
  return crs_id;
}

template <typename T>
void unpack_samples(const std::vector<unsigned char>& raw, std::size_t count, float* out) {
  const T* src = reinterpret_cast<const T*>(raw.data());
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = static_cast<float>(src[i]);
  }
}

}  // namespace

void write_raster(const RasterGrid& raster, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  TiffPtr tif = open_tiff(path, "w");
  TIFF* t = tif.get();

  std::uint16_t bits = 32;
  std::uint16_t format = SAMPLEFORMAT_IEEEFP;
  switch (raster.sample_type()) {
    case SampleType::kUInt8: bits = 8; format = SAMPLEFORMAT_UINT; break;
    case SampleType::kUInt16: bits = 16; format = SAMPLEFORMAT_UINT; break;
    case SampleType::kFloat32: bits = 32; format = SAMPLEFORMAT_IEEEFP; break;
  }
  const auto width = static_cast<std::uint32_t>(raster.width());
  const auto height = static_cast<std::uint32_t>(raster.height());
  const auto bands = static_cast<std::uint16_t>(raster.bands());

  TIFFSetField(t, TIFFTAG_IMAGEWIDTH, width);
  TIFFSetField(t, TIFFTAG_IMAGELENGTH, height);
  TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, bands);
  TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, bits);
  TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, format);
  TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_SEPARATE);
  TIFFSetField(t, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
  TIFFSetField(t, TIFFTAG_COMPRESSION, COMPRESSION_ADOBE_DEFLATE);
  TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, TIFFDefaultStripSize(t, 0));
  if (bands > 1) {
    std::vector<std::uint16_t> extra(bands - 1, EXTRASAMPLE_UNSPECIFIED);
    TIFFSetField(t, TIFFTAG_EXTRASAMPLES, static_cast<std::uint16_t>(extra.size()), extra.data());
  }
  const std::string description = std::string(kKindPrefix) + std::string(raster_kind_name(raster.kind()));
  TIFFSetField(t, TIFFTAG_IMAGEDESCRIPTION, description.c_str());

  const GeoTransform& gt = raster.transform();
  std::array<double, 3> scale = {gt.pixel_size_x, gt.pixel_size_y, 0.0};
  std::array<double, 6> tiepoint = {0.0, 0.0, 0.0, gt.origin_x, gt.origin_y, 0.0};
  TIFFSetField(t, kModelPixelScaleTag, 3, scale.data());
  TIFFSetField(t, kModelTiepointTag, 6, tiepoint.data());

  std::uint16_t epsg_key = 0;
  std::uint16_t epsg_code = 0;
  const std::string ascii = crs_to_epsg_key(gt.crs_id, epsg_key, epsg_code) + "|";
  std::vector<std::uint16_t> keys = {1, 1, 0, 0};
  auto add_key = [&](std::uint16_t id, std::uint16_t location, std::uint16_t count, std::uint16_t value) {
    keys.insert(keys.end(), {id, location, count, value});
    ++keys[3];
  };
  add_key(kGTModelTypeGeoKey, 0, 1, epsg_key == kGeographicTypeGeoKey ? 2 : 1);
  add_key(kGTRasterTypeGeoKey, 0, 1, 1);
  add_key(kGTCitationGeoKey, static_cast<std::uint16_t>(kGeoAsciiParamsTag),
          static_cast<std::uint16_t>(ascii.size()), 0);
  if (epsg_key != 0) {
    add_key(epsg_key, 0, 1, epsg_code);
  }
  TIFFSetField(t, kGeoKeyDirectoryTag, static_cast<std::uint32_t>(keys.size()), keys.data());
  TIFFSetField(t, kGeoAsciiParamsTag, ascii.c_str());
  if (raster.nodata()) {
    TIFFSetField(t, TIFFTAG_GDAL_NODATA, format_nodata(*raster.nodata()).c_str());
  }

  const std::size_t row_bytes = static_cast<std::size_t>(width) * (bits / 8);
  std::vector<unsigned char> row(row_bytes);
  for (std::uint16_t b = 0; b < bands; ++b) {
    const auto band = raster.band(b);
    for (std::uint32_t r = 0; r < height; ++r) {
      const float* src = band.data() + static_cast<std::size_t>(r) * width;
      switch (raster.sample_type()) {
        case SampleType::kUInt8:
          for (std::uint32_t c = 0; c < width; ++c) row[c] = static_cast<std::uint8_t>(src[c]);
          break;
        case SampleType::kUInt16: {
          auto* dst = reinterpret_cast<std::uint16_t*>(row.data());
          for (std::uint32_t c = 0; c < width; ++c) dst[c] = static_cast<std::uint16_t>(src[c]);
          break;
        }
        case SampleType::kFloat32:
          std::memcpy(row.data(), src, row_bytes);
          break;
      }
      require(TIFFWriteScanline(t, row.data(), r, b) >= 0, ErrorCode::kIoError,
              "write failed for '" + path.string() + "'");
    }
  }
  require(TIFFWriteDirectory(t) != 0, ErrorCode::kIoError, "cannot finalize '" + path.string() + "'");
}

RasterGrid read_raster(const std::filesystem::path& path, std::optional<RasterKind> kind) {
  require(std::filesystem::exists(path), ErrorCode::kIoError, "no such file '" + path.string() + "'");
  TiffPtr tif = open_tiff(path, "r");
  TIFF* t = tif.get();

  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint16_t bands = 1;
  std::uint16_t bits = 0;
  std::uint16_t format = SAMPLEFORMAT_UINT;
  std::uint16_t planar = PLANARCONFIG_CONTIG;
  TIFFGetField(t, TIFFTAG_IMAGEWIDTH, &width);
  TIFFGetField(t, TIFFTAG_IMAGELENGTH, &height);
  TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLESPERPIXEL, &bands);
  TIFFGetFieldDefaulted(t, TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLEFORMAT, &format);
  TIFFGetFieldDefaulted(t, TIFFTAG_PLANARCONFIG, &planar);

  SampleType sample_type;
  if (bits == 8 && format == SAMPLEFORMAT_UINT) {
    sample_type = SampleType::kUInt8;
  } else if (bits == 16 && format == SAMPLEFORMAT_UINT) {
    sample_type = SampleType::kUInt16;
  } else if (bits == 32 && format == SAMPLEFORMAT_IEEEFP) {
    sample_type = SampleType::kFloat32;
  } else {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "' has " + std::to_string(bits) +
                                            "-bit samples of format " + std::to_string(format));
  }

  // Georeferencing.
  std::uint32_t count = 0;
  double* scale = nullptr;
  double* tiepoint = nullptr;
  require(TIFFGetField(t, kModelPixelScaleTag, &count, &scale) && count >= 2, ErrorCode::kUnsupportedFormat,
          "'" + path.string() + "' has no ModelPixelScale");
  const double psx = scale[0];
  const double psy = scale[1];
  require(TIFFGetField(t, kModelTiepointTag, &count, &tiepoint) && count >= 6, ErrorCode::kUnsupportedFormat,
          "'" + path.string() + "' has no ModelTiepoint");
  GeoTransform gt;
  gt.pixel_size_x = psx;
  gt.pixel_size_y = psy;
  gt.origin_x = tiepoint[3] - tiepoint[0] * psx;
  gt.origin_y = tiepoint[4] + tiepoint[1] * psy;

  std::uint16_t* keys = nullptr;
  const char* ascii = nullptr;
  if (TIFFGetField(t, kGeoKeyDirectoryTag, &count, &keys) && count >= 4) {
    TIFFGetField(t, kGeoAsciiParamsTag, &ascii);
    const std::uint16_t nkeys = keys[3];
    std::string citation;
    std::string epsg;
    for (std::uint16_t k = 0; k < nkeys && 4u + 4u * k + 3u < count; ++k) {
      const std::uint16_t* entry = keys + 4 + 4 * k;
      if (entry[0] == kGTCitationGeoKey && entry[1] == kGeoAsciiParamsTag && ascii) {
        const std::size_t len = std::strlen(ascii);
        if (entry[3] < len) {
          citation.assign(ascii + entry[3], std::min<std::size_t>(entry[2], len - entry[3]));
          while (!citation.empty() && (citation.back() == '|' || citation.back() == '\0')) {
            citation.pop_back();
          }
        }
      } else if ((entry[0] == kProjectedCSTypeGeoKey || entry[0] == kGeographicTypeGeoKey) &&
                 entry[1] == 0 && entry[3] != 0 && entry[3] != 32767) {
        epsg = "EPSG:" + std::to_string(entry[3]);
      }
    }
    gt.crs_id = citation.empty() ? epsg : citation;
  }
  require(!gt.crs_id.empty(), ErrorCode::kUnsupportedFormat, "'" + path.string() + "' carries no CRS");

  std::optional<double> nodata;
  const char* nodata_text = nullptr;
  if (TIFFGetField(t, TIFFTAG_GDAL_NODATA, &nodata_text) && nodata_text) {
    nodata = std::strtod(nodata_text, nullptr);
  }

  RasterKind resolved = RasterKind::kImage;
  const char* description = nullptr;
  if (TIFFGetField(t, TIFFTAG_IMAGEDESCRIPTION, &description) && description) {
    const std::string text(description);
    if (text.rfind(kKindPrefix, 0) == 0) {
      resolved = parse_raster_kind(text.substr(std::strlen(kKindPrefix)));
    }
  }
  if (kind) {
    resolved = *kind;
  }

  const std::size_t plane = static_cast<std::size_t>(width) * height;
  std::vector<float> values(plane * bands);
  auto unpack = [&](const std::vector<unsigned char>& raw, std::size_t n, float* out) {
    switch (sample_type) {
      case SampleType::kUInt8: unpack_samples<std::uint8_t>(raw, n, out); break;
      case SampleType::kUInt16: unpack_samples<std::uint16_t>(raw, n, out); break;
      case SampleType::kFloat32: unpack_samples<float>(raw, n, out); break;
    }
  };
  std::vector<float> scratch;

  if (TIFFIsTiled(t)) {
    std::uint32_t tw = 0;
    std::uint32_t th = 0;
    TIFFGetField(t, TIFFTAG_TILEWIDTH, &tw);
    TIFFGetField(t, TIFFTAG_TILELENGTH, &th);
    std::vector<unsigned char> raw(static_cast<std::size_t>(TIFFTileSize(t)));
    const std::uint16_t planes = planar == PLANARCONFIG_SEPARATE ? bands : 1;
    const std::uint16_t per_pixel = planar == PLANARCONFIG_SEPARATE ? 1 : bands;
    scratch.resize(static_cast<std::size_t>(tw) * th * per_pixel);
    for (std::uint16_t p = 0; p < planes; ++p) {
      for (std::uint32_t y = 0; y < height; y += th) {
        for (std::uint32_t x = 0; x < width; x += tw) {
          require(TIFFReadTile(t, raw.data(), x, y, 0, p) >= 0, ErrorCode::kIoError,
                  "tile read failed in '" + path.string() + "'");
          unpack(raw, scratch.size(), scratch.data());
          for (std::uint32_t ty = 0; ty < th && y + ty < height; ++ty) {
            for (std::uint32_t tx = 0; tx < tw && x + tx < width; ++tx) {
              for (std::uint16_t s = 0; s < per_pixel; ++s) {
                const std::uint16_t b = planar == PLANARCONFIG_SEPARATE ? p : s;
                values[b * plane + static_cast<std::size_t>(y + ty) * width + x + tx] =
                    scratch[(static_cast<std::size_t>(ty) * tw + tx) * per_pixel + s];
              }
            }
          }
        }
      }
    }
  } else {
    std::vector<unsigned char> raw(static_cast<std::size_t>(TIFFScanlineSize(t)));
    if (planar == PLANARCONFIG_SEPARATE) {
      scratch.resize(width);
      for (std::uint16_t b = 0; b < bands; ++b) {
        for (std::uint32_t r = 0; r < height; ++r) {
          require(TIFFReadScanline(t, raw.data(), r, b) >= 0, ErrorCode::kIoError,
                  "scanline read failed in '" + path.string() + "'");
          unpack(raw, width, values.data() + b * plane + static_cast<std::size_t>(r) * width);
        }
      }
    } else {
      scratch.resize(static_cast<std::size_t>(width) * bands);
      for (std::uint32_t r = 0; r < height; ++r) {
        require(TIFFReadScanline(t, raw.data(), r, 0) >= 0, ErrorCode::kIoError,
                "scanline read failed in '" + path.string() + "'");
        unpack(raw, scratch.size(), scratch.data());
        for (std::uint32_t c = 0; c < width; ++c) {
          for (std::uint16_t b = 0; b < bands; ++b) {
            values[b * plane + static_cast<std::size_t>(r) * width + c] =
                scratch[static_cast<std::size_t>(c) * bands + b];
          }
        }
      }
    }
  }

  return RasterGrid(width, height, bands, std::move(gt), resolved, std::move(values), nodata, sample_type);
}

}  // namespace burnseg
