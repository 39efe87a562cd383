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


#include "burnseg/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "burnseg/error.hpp"
#include "json.hpp"

namespace burnseg {

using nlohmann::json;
namespace fs = std::filesystem;

void SynthConfig::validate() const {
  require(train_scenes >= 1 && predict_scenes >= 0, ErrorCode::kBadConfig,
          "synth needs >= 1 training scene and >= 0 prediction scenes");
  require(width >= 32 && height >= 32, ErrorCode::kBadConfig, "synth scenes must be at least 32 x 32");
  require(pixel_size > 0.0 && lc_pixel_size > 0.0, ErrorCode::kBadConfig, "synth pixel sizes must be > 0");
  require(burned_fraction_min >= 0.0 && burned_fraction_min < burned_fraction_max && burned_fraction_max <= 0.9,
          ErrorCode::kBadConfig, "synth burned fraction range must satisfy 0 <= min < max <= 0.9");
  require(max_clouds >= 0, ErrorCode::kBadConfig, "synth max_clouds must be >= 0");
  require(!crs.empty(), ErrorCode::kBadConfig, "synth crs must be non-empty");
}

namespace {

// Reads keys of one JSON object and rejects any it was not asked about.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    require(j_.is_object(), ErrorCode::kBadConfig, "'" + name_ + "' must be an object");
  }

  template <class T>
  bool get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      return false;
    }
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kBadConfig, "'" + name_ + "." + key + "' has the wrong type: " + e.what());
    }
    return true;
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      require(seen_.count(item.key()) != 0, ErrorCode::kBadConfig,
              "unknown key '" + (name_.empty() ? "" : name_ + ".") + item.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) {
    return {};
  }
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

std::vector<D4> parse_transforms(const std::vector<std::string>& names) {
  std::vector<D4> out;
  for (const std::string& n : names) {
    out.push_back(parse_transform(n));
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::parse(const std::string& text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadConfig, std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  Section top(doc, "");
  require(top.get("schema_version", c.schema_version), ErrorCode::kBadConfig, "config needs 'schema_version'");
  require(c.schema_version == kConfigSchemaVersion, ErrorCode::kBadConfig,
          "unsupported schema_version " + std::to_string(c.schema_version));
  std::string run_dir = "run";
  top.get("run_dir", run_dir);
  c.run_dir = resolve(base_dir, run_dir);
  top.get("seed", c.seed);

  if (const json* j = top.child("synth")) {
    Section s(*j, "synth");
    SynthConfig& sc = c.synth;
    s.get("train_scenes", sc.train_scenes);
    s.get("predict_scenes", sc.predict_scenes);
    s.get("width", sc.width);
    s.get("height", sc.height);
    s.get("pixel_size", sc.pixel_size);
    s.get("lc_pixel_size", sc.lc_pixel_size);
    s.get("burned_fraction_min", sc.burned_fraction_min);
    s.get("burned_fraction_max", sc.burned_fraction_max);
    s.get("max_clouds", sc.max_clouds);
    s.get("crs", sc.crs);
    s.get("origin_x", sc.origin_x);
    s.get("origin_y", sc.origin_y);
    s.finish();
  }

  if (const json* j = top.child("prepare")) {
    Section s(*j, "prepare");
    if (const json* scenes = s.child("scenes")) {
      require(scenes->is_array(), ErrorCode::kBadConfig, "'prepare.scenes' must be an array");
      for (const json& item : *scenes) {
        Section sc(item, "prepare.scenes[]");
        SceneInput in;
        std::string image, delineation, cloud, landcover, aoi;
        require(sc.get("id", in.id), ErrorCode::kBadConfig, "every scene needs an 'id'");
        sc.get("role", in.role);
        sc.get("image", image);
        sc.get("delineation", delineation);
        sc.get("cloud", cloud);
        sc.get("landcover", landcover);
        sc.get("aoi", aoi);
        sc.finish();
        in.image = resolve(base_dir, image);
        in.delineation = resolve(base_dir, delineation);
        in.cloud = resolve(base_dir, cloud);
        in.landcover = resolve(base_dir, landcover);
        in.aoi = resolve(base_dir, aoi);
        c.prepare.scenes.push_back(in);
      }
    }
    s.get("patch_size", c.prepare.patch_size);
    s.get("train_overlap", c.prepare.train_overlap);
    s.get("predict_overlap", c.prepare.predict_overlap);
    s.get("image_nodata", c.prepare.image_nodata);
    s.finish();
  }

  if (const json* j = top.child("split")) {
    Section s(*j, "split");
    s.get("block_size", c.split.block_size);
    s.get("fractions", c.split.fractions);
    s.finish();
  }

  if (const json* j = top.child("model")) {
    Section s(*j, "model");
    std::string arch;
    if (s.get("architecture", arch)) {
      c.model.architecture = parse_architecture(arch);
    }
    s.get("width_scale", c.model.width_scale);
    s.finish();
  }
  c.train = TrainConfig::defaults_for(c.model.architecture);
  c.loss = LossConfig::defaults_for(c.model.architecture);

  if (const json* j = top.child("train")) {
    Section s(*j, "train");
    std::string framework;
    if (s.get("framework", framework)) {
      c.framework = parse_framework(framework);
    }
    s.get("batch_size", c.train.batch_size);
    s.get("learning_rate", c.train.learning_rate);
    s.get("weight_decay", c.train.weight_decay);
    s.get("epochs", c.train.epochs);
    s.get("aug_probability", c.train.aug_probability);
    s.get("mixed_precision", c.train.mixed_precision);
    s.get("lambda_lc", c.loss.lambda_lc);
    s.get("dice_smooth", c.loss.dice_smooth);
    s.get("loss_scale_growth_interval", c.train.scaler.growth_interval);
    s.finish();
  }
  c.model.with_lc_head = c.framework == Framework::kMTL;

  if (const json* j = top.child("predict")) {
    Section s(*j, "predict");
    s.get("tta", c.predict.tta.enabled);
    std::vector<std::string> names;
    if (s.get("transforms", names)) {
      c.predict.tta.transforms = parse_transforms(names);
    }
    s.get("threshold", c.predict.tta.threshold);
    s.get("mixed_precision", c.predict.mixed_precision);
    s.get("batch_size", c.predict.batch_size);
    std::string checkpoint;
    s.get("checkpoint", checkpoint);
    c.predict.checkpoint = resolve(base_dir, checkpoint);
    s.finish();
  }

  if (const json* j = top.child("evaluate")) {
    Section s(*j, "evaluate");
    s.get("technique", c.evaluate.technique);
    s.finish();
  }
  top.finish();

  c.set_seed(c.seed);
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), fs::absolute(path).parent_path());
}

void PipelineConfig::set_seed(std::uint64_t value) {
  seed = value;
  model.init_seed = value;
  train.seed = value;
}

void PipelineConfig::validate() const {
  synth.validate();
  for (const SceneInput& s : prepare.scenes) {
    require(s.role == "train" || s.role == "predict", ErrorCode::kBadConfig,
            "scene '" + s.id + "': role must be 'train' or 'predict'");
    require(!s.image.empty() && !s.delineation.empty() && !s.cloud.empty() && !s.landcover.empty() &&
                !s.aoi.empty(),
            ErrorCode::kBadConfig, "scene '" + s.id + "' needs image, delineation, cloud, landcover and aoi");
  }
  PatchSpec{prepare.patch_size, prepare.train_overlap, 0.0f}.validate();
  PatchSpec{prepare.patch_size, prepare.predict_overlap, 0.0f}.validate();
  require(split.block_size > 0.0, ErrorCode::kBadConfig, "split.block_size must be > 0");
  double total = 0.0;
  for (double f : split.fractions) {
    require(f >= 0.0 && f <= 1.0, ErrorCode::kBadFractions, "split fractions must lie in [0, 1]");
    total += f;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kBadFractions, "split fractions must sum to 1");
  model.validate();
  train.validate();
  loss.validate();
  predict.tta.validate();
  require(predict.batch_size >= 1, ErrorCode::kBadConfig, "predict.batch_size must be >= 1");
}

std::string PipelineConfig::to_json() const {
  json scenes = json::array();
  for (const SceneInput& s : prepare.scenes) {
    scenes.push_back({{"id", s.id},
                      {"role", s.role},
                      {"image", s.image.string()},
                      {"delineation", s.delineation.string()},
                      {"cloud", s.cloud.string()},
                      {"landcover", s.landcover.string()},
                      {"aoi", s.aoi.string()}});
  }
  std::vector<std::string> transforms;
  for (D4 t : predict.tta.transforms) {
    transforms.emplace_back(transform_name(t));
  }
  const json j = {
      {"schema_version", schema_version},
      {"run_dir", run_dir.string()},
      {"seed", seed},
      {"synth",
       {{"train_scenes", synth.train_scenes},
        {"predict_scenes", synth.predict_scenes},
        {"width", synth.width},
        {"height", synth.height},
        {"pixel_size", synth.pixel_size},
        {"lc_pixel_size", synth.lc_pixel_size},
        {"burned_fraction_min", synth.burned_fraction_min},
        {"burned_fraction_max", synth.burned_fraction_max},
        {"max_clouds", synth.max_clouds},
        {"crs", synth.crs},
        {"origin_x", synth.origin_x},
        {"origin_y", synth.origin_y}}},
      {"prepare",
       {{"scenes", scenes},
        {"patch_size", prepare.patch_size},
        {"train_overlap", prepare.train_overlap},
        {"predict_overlap", prepare.predict_overlap},
        {"image_nodata", prepare.image_nodata}}},
      {"split", {{"block_size", split.block_size}, {"fractions", split.fractions}}},
      {"model", {{"architecture", architecture_name(model.architecture)}, {"width_scale", model.width_scale}}},
      {"train",
       {{"framework", framework_name(framework)},
        {"batch_size", train.batch_size},
        {"learning_rate", train.learning_rate},
        {"weight_decay", train.weight_decay},
        {"epochs", train.epochs},
        {"aug_probability", train.aug_probability},
        {"mixed_precision", train.mixed_precision},
        {"lambda_lc", loss.lambda_lc},
        {"dice_smooth", loss.dice_smooth},
        {"loss_scale_growth_interval", train.scaler.growth_interval}}},
      {"predict",
       {{"tta", predict.tta.enabled},
        {"transforms", transforms},
        {"threshold", predict.tta.threshold},
        {"mixed_precision", predict.mixed_precision},
        {"batch_size", predict.batch_size},
        {"checkpoint", predict.checkpoint.string()}}},
      {"evaluate", {{"technique", evaluate.technique}}}};
  return j.dump();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) == 1, ErrorCode::kIoError,
          "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string PipelineConfig::hash() const { return sha256_hex(to_json()); }

}  // namespace burnseg
