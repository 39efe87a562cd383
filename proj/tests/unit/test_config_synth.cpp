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


#include <gtest/gtest.h>

#include "burnseg/config.hpp"
#include "burnseg/error.hpp"
#include "burnseg/synth.hpp"
#include "oracles.hpp"

namespace burnseg {
namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    PipelineConfig::parse(text, "/base");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(Config, MinimalDefaults) {
  const PipelineConfig c = PipelineConfig::parse(R"({"schema_version": 1})", "/base");
  EXPECT_EQ(c.run_dir, std::filesystem::path("/base/run"));
  EXPECT_EQ(c.framework, Framework::kSTL);
  EXPECT_FALSE(c.model.with_lc_head);
  EXPECT_EQ(c.train.learning_rate, 1e-4);
  EXPECT_EQ(c.loss.lambda_lc, 0.3);
  EXPECT_EQ(c.prepare.patch_size, 512);
  EXPECT_EQ(c.prepare.predict_overlap, 0.2);
  EXPECT_EQ(c.split.block_size, 2000.0);
  EXPECT_EQ(c.predict.tta.transforms.size(), 8u);
}

TEST(Config, ArchitectureDefaults) {
  const PipelineConfig c = PipelineConfig::parse(
      R"({"schema_version": 1, "model": {"architecture": "SEGFORMER_B2"}, "train": {"framework": "MTL"}})", "/b");
  EXPECT_EQ(c.train.learning_rate, 6e-5);
  EXPECT_EQ(c.loss.lambda_lc, 0.2);
  EXPECT_TRUE(c.model.with_lc_head);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "sede": 3})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "train": {"epoch": 3}})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "prepare": {"scenes": [{"id": "a", "img": "x"}]}})"),
            ErrorCode::kBadConfig);
}

TEST(Config, BadValues) {
  EXPECT_EQ(parse_code(R"({})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 2})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code("not json"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "train": {"epochs": "ten"}})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "model": {"architecture": "VGG"}})"), ErrorCode::kBadConfig);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "split": {"fractions": [0.8, 0.2, 0.1]}})"),
            ErrorCode::kBadFractions);
  EXPECT_EQ(parse_code(R"({"schema_version": 1, "predict": {"transforms": ["identity", "warp"]}})"),
            ErrorCode::kUnknownTransform);
}

TEST(Config, RelativePathsResolveAgainstConfigDir) {
  const PipelineConfig c = PipelineConfig::parse(R"({"schema_version": 1, "run_dir": "out",
    "prepare": {"scenes": [{"id": "a", "image": "img/a.tif", "delineation": "/abs/d.geojson",
                            "cloud": "c.tif", "landcover": "l.tif", "aoi": "aoi.gpkg"}]}})",
                                                 "/data/cfg");
  EXPECT_EQ(c.run_dir, std::filesystem::path("/data/cfg/out"));
  EXPECT_EQ(c.prepare.scenes[0].image, std::filesystem::path("/data/cfg/img/a.tif"));
  EXPECT_EQ(c.prepare.scenes[0].delineation, std::filesystem::path("/abs/d.geojson"));
}

TEST(Config, SeedFeedsEveryConsumer) {
  PipelineConfig c = PipelineConfig::parse(R"({"schema_version": 1, "seed": 5})", "/b");
  EXPECT_EQ(c.model.init_seed, 5u);
  EXPECT_EQ(c.train.seed, 5u);
  const std::string h5 = c.hash();
  c.set_seed(6);
  EXPECT_EQ(c.train.seed, 6u);
  EXPECT_NE(c.hash(), h5);
  EXPECT_EQ(h5.size(), 64u);
}

TEST(Config, CanonicalJsonReparses) {
  const PipelineConfig a = PipelineConfig::parse(
      R"({"schema_version": 1, "seed": 9, "train": {"epochs": 3, "framework": "MTL"}, "predict": {"tta": false}})",
      "/b");
  const PipelineConfig b = PipelineConfig::parse(a.to_json(), "/elsewhere");
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(Config, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

SynthConfig small_synth() {
  SynthConfig s;
  s.width = 96;
  s.height = 96;
  return s;
}

TEST(Synth, SameSeedSameScene) {
  const SyntheticScene a = generate_scene(small_synth(), 3, 0, "train");
  const SyntheticScene b = generate_scene(small_synth(), 3, 0, "train");
  const SyntheticScene c = generate_scene(small_synth(), 4, 0, "train");
  EXPECT_TRUE(a.image == b.image);
  EXPECT_TRUE(a.cloud == b.cloud);
  EXPECT_TRUE(a.landcover == b.landcover);
  EXPECT_EQ(a.burned_fraction, b.burned_fraction);
  EXPECT_FALSE(a.image == c.image);
}

TEST(Synth, BurnedFractionInRange) {
  const SynthConfig s = small_synth();
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SyntheticScene sc = generate_scene(s, seed, static_cast<std::int64_t>(seed % 3), "train");
    EXPECT_GE(sc.burned_fraction, s.burned_fraction_min) << seed;
    EXPECT_LE(sc.burned_fraction, s.burned_fraction_max) << seed;
  }
}

TEST(Synth, SceneIsSelfConsistent) {
  const SyntheticScene sc = generate_scene(small_synth(), 1, 0, "train");
  EXPECT_EQ(sc.image.bands(), 4);
  EXPECT_EQ(sc.image.sample_type(), SampleType::kUInt16);
  EXPECT_TRUE(sc.cloud.same_geometry(sc.image));
  EXPECT_EQ(sc.delineation.crs_id, sc.image.transform().crs_id);
  EXPECT_FALSE(sc.aoi.empty());
  // imagery never collides with the 0 nodata value
  for (float v : sc.image.values()) ASSERT_GE(v, 1.0f);
  // fraction agrees with a pixel-center scan of the scar polygons
  const RasterGrid mask = binarize_delineation(sc.delineation, sc.image);
  double burned = 0.0;
  for (float v : mask.values()) burned += v;
  EXPECT_NEAR(sc.burned_fraction, burned / static_cast<double>(mask.pixel_count()), 1e-12);
}

TEST(Synth, ScenesDoNotOverlap) {
  const SyntheticScene a = generate_scene(small_synth(), 1, 0, "train");
  const SyntheticScene b = generate_scene(small_synth(), 1, 1, "train");
  EXPECT_FALSE(intersect(a.image.extent(), b.image.extent()).has_value());
}

TEST(Synth, DatasetOnDisk) {
  testing::TempDir dir("synth");
  SynthConfig s = small_synth();
  s.train_scenes = 2;
  s.predict_scenes = 1;
  const auto scenes = write_synthetic_dataset(s, 2, dir.path());
  ASSERT_EQ(scenes.size(), 3u);
  EXPECT_EQ(scenes[2].role, "predict");
  for (const SceneInput& in : scenes) {
    for (const auto& p : {in.image, in.delineation, in.cloud, in.landcover, in.aoi}) {
      EXPECT_TRUE(std::filesystem::exists(p)) << p;
    }
  }
  const auto back = read_scene_index(dir.path() / "scenes.json");
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].id, scenes[0].id);
  EXPECT_EQ(back[1].image, scenes[1].image);
}

}  // namespace
}  // namespace burnseg
