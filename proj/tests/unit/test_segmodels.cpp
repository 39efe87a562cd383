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

#include "burnseg/error.hpp"
#include "burnseg/losses.hpp"
#include "burnseg/models.hpp"
#include "burnseg/precision.hpp"
#include "oracles.hpp"

namespace burnseg {
namespace {

ModelConfig tiny(Architecture arch, bool lc, std::uint64_t seed = 1) {
  ModelConfig c;
  c.architecture = arch;
  c.width_scale = 0.1;
  c.with_lc_head = lc;
  c.init_seed = seed;
  return c;
}

class Models : public ::testing::TestWithParam<Architecture> {};

TEST_P(Models, OutputShapes) {
  SegmentationModel m(tiny(GetParam(), true));
  m.eval();
  torch::NoGradGuard ng;
  const auto out = m.forward(torch::randn({2, 4, 64, 96}));
  EXPECT_EQ(out.ba_logits.sizes(), (std::vector<std::int64_t>{2, 1, 64, 96}));
  ASSERT_TRUE(out.lc_logits.has_value());
  EXPECT_EQ(out.lc_logits->sizes(), (std::vector<std::int64_t>{2, 12, 64, 96}));
  EXPECT_EQ(out.ba_logits.scalar_type(), torch::kFloat);
}

TEST_P(Models, SameSeedSameWeights) {
  SegmentationModel a(tiny(GetParam(), false, 5));
  SegmentationModel b(tiny(GetParam(), false, 5));
  SegmentationModel c(tiny(GetParam(), false, 6));
  const auto pa = a.parameters(), pb = b.parameters(), pc = c.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_TRUE(torch::equal(pa[i], pb[i]));
    any_diff = any_diff || !torch::equal(pa[i], pc[i]);
  }
  EXPECT_TRUE(any_diff);
}

TEST_P(Models, InputValidation) {
  SegmentationModel m(tiny(GetParam(), false));
  auto code = [&](const torch::Tensor& x) {
    try {
      m.forward(x);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code(torch::zeros({1, 4, 48, 64})), ErrorCode::kShapeError);
  EXPECT_EQ(code(torch::zeros({1, 3, 64, 64})), ErrorCode::kShapeError);
  EXPECT_EQ(code(torch::zeros({4, 64, 64})), ErrorCode::kShapeError);
  torch::Tensor bad = torch::zeros({1, 4, 32, 32});
  bad[0][0][3][3] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(code(bad), ErrorCode::kNonfiniteInput);
}

TEST_P(Models, DropLcHeadKeepsBaLogitsAndParams) {
  SegmentationModel m(tiny(GetParam(), true, 3));
  m.eval();
  SegmentationModel d = m.drop_lc_head();
  d.eval();
  EXPECT_FALSE(d.config().with_lc_head);
  EXPECT_EQ(d.count_params(), m.count_params() - m.lc_head_params());
  EXPECT_GT(m.lc_head_params(), 0);
  torch::NoGradGuard ng;
  const torch::Tensor x = torch::randn({1, 4, 32, 64});
  EXPECT_TRUE(torch::equal(m.forward(x).ba_logits, d.forward(x).ba_logits));
  EXPECT_FALSE(d.forward(x).lc_logits.has_value());
  try {
    d.drop_lc_head();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoLcHead);
  }
}

TEST_P(Models, HeadsAreIndependent) {
  // BA loss leaves the LC head untouched; LC loss reaches the trunk.
  SegmentationModel m(tiny(GetParam(), true, 4));
  m.train();
  const torch::Tensor x = torch::randn({2, 4, 32, 32});
  auto out = m.forward(x);
  out.ba_logits.sum().backward();
  for (const auto& p : m.lc_head_parameters()) {
    EXPECT_TRUE(!p.grad().defined() || p.grad().abs().sum().item<double>() == 0.0);
  }
  double trunk_grad = 0.0;
  for (const auto& p : m.trunk_parameters()) {
    if (p.grad().defined()) trunk_grad += p.grad().abs().sum().item<double>();
  }
  EXPECT_GT(trunk_grad, 0.0);

  for (auto& p : m.parameters()) {
    if (p.grad().defined()) p.mutable_grad().zero_();
  }
  out = m.forward(x);
  out.lc_logits->sum().backward();
  double lc_trunk = 0.0;
  for (const auto& p : m.trunk_parameters()) {
    if (p.grad().defined()) lc_trunk += p.grad().abs().sum().item<double>();
  }
  EXPECT_GT(lc_trunk, 0.0);
  for (const auto& p : m.ba_head_parameters()) {
    EXPECT_TRUE(!p.grad().defined() || p.grad().abs().sum().item<double>() == 0.0);
  }
}

TEST_P(Models, EveryParameterReceivesGradient) {
  SegmentationModel m(tiny(GetParam(), true, 8));
  m.train();
  auto out = m.forward(torch::randn({2, 4, 32, 32}));
  (out.ba_logits.pow(2).mean() + out.lc_logits->pow(2).mean()).backward();
  for (const auto& item : m.named_parameters()) {
    ASSERT_TRUE(item.value().grad().defined()) << item.key();
    EXPECT_TRUE(torch::isfinite(item.value().grad()).all().item<bool>()) << item.key();
  }
}

TEST_P(Models, CheckpointRoundTripIsBitwise) {
  testing::TempDir dir("ckpt");
  SegmentationModel m(tiny(GetParam(), true, 9));
  m.eval();
  save_checkpoint(m, R"({"note":"x"})", dir.path() / "m.ckpt");
  LoadedCheckpoint back = load_checkpoint(dir.path() / "m.ckpt");
  EXPECT_EQ(back.model.config(), m.config());
  EXPECT_EQ(back.metadata_json, R"({"note":"x"})");
  back.model.eval();
  torch::NoGradGuard ng;
  const torch::Tensor x = torch::randn({1, 4, 32, 32});
  EXPECT_TRUE(torch::equal(m.forward(x).ba_logits, back.model.forward(x).ba_logits));
}

TEST_P(Models, MixedPrecisionStaysClose) {
  SegmentationModel m(tiny(GetParam(), false, 2));
  m.eval();
  torch::NoGradGuard ng;
  const torch::Tensor x = torch::randn({1, 4, 32, 32});
  const torch::Tensor full = m.forward(x).ba_logits;
  torch::Tensor mixed;
  {
    PrecisionScope scope(PrecisionPolicy::mixed_half());
    mixed = m.forward(x).ba_logits;
  }
  EXPECT_EQ(mixed.scalar_type(), torch::kFloat);
  EXPECT_LT((full - mixed).abs().max().item<double>(), 5e-2 * (1.0 + full.abs().max().item<double>()));
}

INSTANTIATE_TEST_SUITE_P(Arch, Models,
                         ::testing::Values(Architecture::kUNetResNet34, Architecture::kSegFormerMiTB2),
                         [](const auto& info) { return std::string(architecture_name(info.param)); });

TEST(ModelConfig, ScaledChannelsRoundToEight) {
  ModelConfig c;
  c.width_scale = 0.1;
  EXPECT_EQ(c.scaled(64), 8);
  EXPECT_EQ(c.scaled(512), 56);
  c.width_scale = 1.0;
  EXPECT_EQ(c.scaled(64), 64);
}

TEST(ModelConfig, JsonRoundTrip) {
  ModelConfig c = tiny(Architecture::kSegFormerMiTB2, true, 77);
  EXPECT_EQ(ModelConfig::from_json(c.to_json()), c);
  EXPECT_EQ(parse_architecture(architecture_name(c.architecture)), c.architecture);
}

TEST(ModelConfig, ReferenceParameterCounts) {
  ModelConfig u;
  EXPECT_NEAR(static_cast<double>(SegmentationModel(u).count_params()), 24.4e6, 0.02 * 24.4e6);
  ModelConfig s;
  s.architecture = Architecture::kSegFormerMiTB2;
  EXPECT_NEAR(static_cast<double>(SegmentationModel(s).count_params()), 27.4e6, 0.02 * 27.4e6);
}

TEST(Precision, PolicyRoutesOpClasses) {
  const torch::Tensor x = torch::ones({2, 2});
  EXPECT_EQ(cast_for(OpClass::kConvolution, x).scalar_type(), torch::kFloat);
  PrecisionScope scope(PrecisionPolicy::mixed_half());
  EXPECT_EQ(cast_for(OpClass::kConvolution, x).scalar_type(), torch::kHalf);
  EXPECT_EQ(cast_for(OpClass::kMatMul, x).scalar_type(), torch::kHalf);
  EXPECT_EQ(cast_for(OpClass::kNormalization, x).scalar_type(), torch::kFloat);
  EXPECT_EQ(cast_for(OpClass::kSoftmax, x).scalar_type(), torch::kFloat);
  EXPECT_EQ(cast_for(OpClass::kLoss, x).scalar_type(), torch::kFloat);
  EXPECT_EQ(cast_for(OpClass::kConvolution, x.to(torch::kDouble)).scalar_type(), torch::kDouble);
}

}  // namespace
}  // namespace burnseg
