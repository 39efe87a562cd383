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
#include <torch/torch.h>

#include "burnseg/dataset.hpp"
#include "burnseg/error.hpp"
#include "burnseg/loss_scaler.hpp"
#include "burnseg/precision.hpp"
#include "mp_parity.hpp"
#include "burnseg/trainer.hpp"
#include "oracles.hpp"

namespace burnseg {
namespace {

// Bright disc on a darker noisy background; the disc is the burned class.
TrainingSet disc_set(std::int64_t n, std::int64_t size, std::uint64_t seed, bool with_lc) {
  torch::manual_seed(seed);
  const torch::Tensor yy = torch::arange(size, torch::kFloat).view({size, 1}).expand({size, size});
  const torch::Tensor xx = torch::arange(size, torch::kFloat).view({1, size}).expand({size, size});
  std::vector<torch::Tensor> images, bas, lcs;
  for (std::int64_t i = 0; i < n; ++i) {
    const float cy = torch::randint(size / 4, size - size / 4, {1}).item<float>();
    const float cx = torch::randint(size / 4, size - size / 4, {1}).item<float>();
    const float r = torch::randint(size / 10 + 1, size / 5 + 2, {1}).item<float>();
    const torch::Tensor disc = ((yy - cy).pow(2) + (xx - cx).pow(2)).le(r * r);
    const torch::Tensor img = 0.3f + 0.05f * torch::randn({4, size, size}) + 0.5f * disc.to(torch::kFloat);
    images.push_back(img);
    bas.push_back(disc.to(torch::kUInt8));
    lcs.push_back(xx.lt(size / 2).to(torch::kUInt8) + 2 * disc.to(torch::kUInt8));
  }
  TrainingSet s;
  s.images = torch::stack(images);
  s.ba = torch::stack(bas);
  if (with_lc) s.lc = torch::stack(lcs);
  return s;
}

ModelConfig tiny_unet(bool lc, std::uint64_t seed = 1) {
  ModelConfig c;
  c.width_scale = 0.1;
  c.with_lc_head = lc;
  c.init_seed = seed;
  return c;
}

TrainConfig fast_config(std::int64_t epochs) {
  TrainConfig t;
  t.batch_size = 4;
  t.learning_rate = 1e-3;
  t.epochs = epochs;
  t.seed = 7;
  return t;
}

TEST(Training, OverfitsDiscs) {
  const TrainingSet data = disc_set(8, 64, 1, false);
  SegmentationModel m(tiny_unet(false));
  TrainResult r = train(m, data, data, fast_config(30), {}, Framework::kSTL);
  const EpochRecord final_train = evaluate_set(r.best_model, r.stats, data, {}, Framework::kSTL, 4, false);
  EXPECT_GT(final_train.dice, 0.95);
  ASSERT_EQ(r.history.size(), 60u);

  std::vector<double> losses;
  for (const EpochRecord& e : r.history) {
    if (e.split == "train") losses.push_back(e.loss);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 4; k < losses.size(); ++k) {
    const double avg = (losses[k] + losses[k - 1] + losses[k - 2] + losses[k - 3] + losses[k - 4]) / 5.0;
    EXPECT_LE(avg, prev) << "epoch " << k + 1;
    prev = avg;
  }
}

TEST(Training, MtlWithZeroLambdaMatchesStl) {
  const TrainingSet data = disc_set(6, 32, 2, true);
  SegmentationModel stl(tiny_unet(false, 3));
  SegmentationModel mtl(tiny_unet(true, 3));
  const TrainConfig cfg = fast_config(2);
  train(stl, data, data, cfg, {0.3, 1.0}, Framework::kSTL);
  train(mtl, data, data, cfg, {0.0, 1.0}, Framework::kMTL);
  const auto a = stl.trunk_parameters(), b = mtl.trunk_parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(torch::equal(a[i], b[i])) << i;
  const auto ha = stl.ba_head_parameters(), hb = mtl.ba_head_parameters();
  for (std::size_t i = 0; i < ha.size(); ++i) EXPECT_TRUE(torch::equal(ha[i], hb[i])) << i;
}

TEST(Training, FullPrecisionIsDeterministic) {
  const TrainingSet data = disc_set(6, 32, 3, false);
  auto run = [&] {
    SegmentationModel m(tiny_unet(false, 4));
    return train(m, data, data, fast_config(3), {}, Framework::kSTL);
  };
  const TrainResult a = run(), b = run();
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    EXPECT_EQ(a.history[k].loss, b.history[k].loss);
    EXPECT_EQ(a.history[k].dice, b.history[k].dice);
  }
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

TEST(Training, BestEpochHasBestValidationDice) {
  const TrainingSet data = disc_set(6, 32, 4, false);
  SegmentationModel m(tiny_unet(false, 5));
  const TrainResult r = train(m, data, data, fast_config(4), {}, Framework::kSTL);
  double best = -1.0;
  std::int64_t epoch = 0;
  for (const EpochRecord& e : r.history) {
    if (e.split == "val" && e.dice >= best) {
      best = e.dice;
      epoch = e.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, epoch);
  EXPECT_EQ(r.best_val_dice, best);
  SegmentationModel best_model = r.best_model;
  EXPECT_EQ(evaluate_set(best_model, r.stats, data, {}, Framework::kSTL, 4, false).dice, best);
}

TEST(Training, Errors) {
  const TrainingSet data = disc_set(4, 32, 5, false);
  SegmentationModel m(tiny_unet(false));
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code([&] { train(m, TrainingSet{}, data, fast_config(1), {}, Framework::kSTL); }),
            ErrorCode::kEmptyDataset);
  EXPECT_EQ(code([&] { train(m, data, data, fast_config(1), {}, Framework::kMTL); }), ErrorCode::kMissingLc);

  SegmentationModel broken(tiny_unet(false));
  {
    torch::NoGradGuard ng;
    broken.ba_head_parameters().front().fill_(std::numeric_limits<float>::quiet_NaN());
  }
  EXPECT_EQ(code([&] { train(broken, data, data, fast_config(1), {}, Framework::kSTL); }), ErrorCode::kNanLoss);
  TrainConfig mp = fast_config(2);
  mp.batch_size = 2;
  mp.mixed_precision = true;
  mp.scaler.init_scale = 1.0;
  EXPECT_EQ(code([&] { train(broken, data, data, mp, {}, Framework::kSTL); }), ErrorCode::kNanLoss);
}

TEST(Training, MixedPrecisionGradientsMatchFullPrecision) {
  for (double scale : {256.0, 65536.0}) {
    const testing::ParityResult r = testing::unet_mp_parity(scale, 6);
    EXPECT_TRUE(r.finite) << scale;
    EXPECT_LE(r.relative_error, 1e-3) << scale;
  }
}

TEST(Training, HistoryCsvLayout) {
  const std::vector<EpochRecord> h = {{1, "train", 0.5, 0.25, 0.75, 1.5}, {1, "val", 0.6, 0.4, 0.5, 0.25}};
  EXPECT_EQ(history_csv(h),
            "epoch,split,dice,iou,loss,seconds\n1,train,0.500000,0.250000,0.750000,1.500\n"
            "1,val,0.600000,0.400000,0.500000,0.250\n");
}

TEST(Dataset, BandStatsArePopulationMoments) {
  const torch::Tensor imgs = torch::rand({3, 4, 5, 5}, torch::kFloat);
  const BandStats s = compute_band_stats(imgs);
  for (std::int64_t b = 0; b < 4; ++b) {
    const torch::Tensor band = imgs.select(1, b).to(torch::kDouble);
    EXPECT_NEAR(s.mean[b], band.mean().item<double>(), 1e-9);
    EXPECT_NEAR(s.stddev[b], band.std(false).item<double>(), 1e-9);
  }
  EXPECT_EQ(BandStats::from_json(s.to_json()), s);
  const torch::Tensor n = s.normalize(imgs);
  EXPECT_NEAR(n.select(1, 2).mean().item<double>(), 0.0, 1e-5);
}

}  // namespace
}  // namespace burnseg
