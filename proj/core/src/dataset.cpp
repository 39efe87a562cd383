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


#include "burnseg/dataset.hpp"

#include <cmath>

#include "burnseg/error.hpp"
#include "json.hpp"

namespace burnseg {

using torch::Tensor;

Tensor BandStats::normalize(const Tensor& images) const {
  require(images.dim() == 4 && images.size(1) == static_cast<std::int64_t>(mean.size()), ErrorCode::kShapeError,
          "band statistics do not match the image band count");
  const auto opts = torch::TensorOptions().dtype(images.scalar_type());
  const Tensor m = torch::tensor(mean, torch::kDouble).to(opts).view({1, -1, 1, 1});
  const Tensor s = torch::tensor(stddev, torch::kDouble).to(opts).view({1, -1, 1, 1});
  return (images - m) / s;
}

std::string BandStats::to_json() const { return nlohmann::json{{"mean", mean}, {"stddev", stddev}}.dump(); }

BandStats BandStats::from_json(const std::string& text) {
  BandStats s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("stddev").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, std::string("band statistics: ") + e.what());
  }
  require(s.mean.size() == s.stddev.size(), ErrorCode::kUnsupportedFormat, "band statistics size mismatch");
  return s;
}

BandStats compute_band_stats(const Tensor& images) {
  require(images.dim() == 4 && images.size(0) > 0, ErrorCode::kEmptyDataset, "no images to compute statistics on");
  const Tensor x = images.to(torch::kDouble).transpose(0, 1).reshape({images.size(1), -1});
  const Tensor m = x.mean(1);
  const Tensor s = x.std(1, /*unbiased=*/false);
  BandStats stats;
  for (std::int64_t b = 0; b < images.size(1); ++b) {
    stats.mean.push_back(m[b].item<double>());
    const double sd = s[b].item<double>();
    stats.stddev.push_back(sd > 0.0 && std::isfinite(sd) ? sd : 1.0);
  }
  return stats;
}

TrainingSet TrainingSet::select(const std::vector<std::int64_t>& indices) const {
  const Tensor idx = torch::tensor(indices, torch::kLong);
  TrainingSet out;
  out.images = images.index_select(0, idx);
  out.ba = ba.index_select(0, idx);
  if (lc) {
    out.lc = lc->index_select(0, idx);
  }
  return out;
}

Tensor raster_to_tensor(const RasterGrid& raster) {
  const auto values = raster.values();
  return torch::from_blob(const_cast<float*>(values.data()), {raster.bands(), raster.height(), raster.width()},
                          torch::kFloat)
      .clone();
}

namespace {

Tensor labels_from(const RasterGrid& raster) {
  Tensor t = raster_to_tensor(raster)[0];
  if (raster.nodata()) {
    t = t.masked_fill(t.eq(static_cast<float>(*raster.nodata())), 255.0f);
  }
  return t.to(torch::kUInt8);
}

}  // namespace

TrainingSet dataset_from_patches(const PatchSet& images, const PatchSet& ba, const PatchSet* lc,
                                 const std::vector<std::size_t>& indices) {
  require(images.size() == ba.size() && (lc == nullptr || lc->size() == images.size()), ErrorCode::kGridMismatch,
          "image and label patch sets differ in size");
  std::vector<Tensor> xs;
  std::vector<Tensor> ys;
  std::vector<Tensor> ls;
  for (std::size_t i : indices) {
    require(i < images.size(), ErrorCode::kInvalidArgument, "patch index out of range");
    xs.push_back(raster_to_tensor(images.patches[i]));
    ys.push_back(labels_from(ba.patches[i]));
    if (lc != nullptr) {
      ls.push_back(labels_from(lc->patches[i]));
    }
  }
  TrainingSet out;
  if (xs.empty()) {
    return out;
  }
  out.images = torch::stack(xs);
  out.ba = torch::stack(ys);
  if (lc != nullptr) {
    out.lc = torch::stack(ls);
  }
  return out;
}

TrainingSet concat(const std::vector<TrainingSet>& sets) {
  std::vector<Tensor> xs;
  std::vector<Tensor> ys;
  std::vector<Tensor> ls;
  bool all_lc = true;
  for (const TrainingSet& s : sets) {
    if (s.size() == 0) {
      continue;
    }
    xs.push_back(s.images);
    ys.push_back(s.ba);
    all_lc = all_lc && s.lc.has_value();
    if (s.lc) {
      ls.push_back(*s.lc);
    }
  }
  TrainingSet out;
  if (xs.empty()) {
    return out;
  }
  out.images = torch::cat(xs);
  out.ba = torch::cat(ys);
  if (all_lc) {
    out.lc = torch::cat(ls);
  }
  return out;
}

}  // namespace burnseg
