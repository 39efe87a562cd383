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

#include "burnseg/models.hpp"

#include <cmath>

#include "burnseg/error.hpp"
#include "burnseg/precision.hpp"
#include "json.hpp"

namespace burnseg {

namespace F = torch::nn::functional;
using torch::Tensor;

std::string_view architecture_name(Architecture arch) {
  switch (arch) {
    case Architecture::kUNetResNet34: return "UNET_RN34";
    case Architecture::kSegFormerMiTB2: return "SEGFORMER_B2";
  }
  return "UNET_RN34";
}

Architecture parse_architecture(std::string_view name) {
  for (Architecture a : {Architecture::kUNetResNet34, Architecture::kSegFormerMiTB2}) {
    if (architecture_name(a) == name) {
      return a;
    }
  }
  fail(ErrorCode::kBadConfig, "unknown architecture '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  require(in_channels == 4, ErrorCode::kBadConfig, "in_channels must be 4 (Blue, Green, Red, NIR)");
  require(num_lc_classes >= 2, ErrorCode::kBadConfig, "num_lc_classes must be >= 2");
  require(width_scale > 0.0 && std::isfinite(width_scale), ErrorCode::kBadConfig, "width_scale must be > 0");
}

std::int64_t ModelConfig::scaled(std::int64_t channels) const {
  const auto raw = static_cast<std::int64_t>(std::ceil(static_cast<double>(channels) * width_scale - 1e-9));
  return std::max<std::int64_t>(8, (raw + 7) / 8 * 8);
}

std::string ModelConfig::to_json() const {
  nlohmann::json j = {{"architecture", architecture_name(architecture)},
                      {"in_channels", in_channels},
                      {"num_lc_classes", num_lc_classes},
                      {"width_scale", width_scale},
                      {"with_lc_head", with_lc_head},
                      {"init_seed", init_seed}};
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  ModelConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.architecture = parse_architecture(j.at("architecture").get<std::string>());
    c.in_channels = j.at("in_channels").get<std::int64_t>();
    c.num_lc_classes = j.at("num_lc_classes").get<std::int64_t>();
    c.width_scale = j.at("width_scale").get<double>();
    c.with_lc_head = j.at("with_lc_head").get<bool>();
    c.init_seed = j.at("init_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kBadConfig, std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

// ------------------------------------------------------------------ layers
//
// Thin wrappers that apply the precision policy to inputs and weights before
// calling the functional op.

torch::nn::Conv2d make_conv(std::int64_t in, std::int64_t out, std::int64_t kernel, std::int64_t stride,
                            std::int64_t padding, bool bias, std::int64_t groups = 1) {
  return torch::nn::Conv2d(
      torch::nn::Conv2dOptions(in, out, kernel).stride(stride).padding(padding).bias(bias).groups(groups));
}

Tensor conv(const torch::nn::Conv2d& m, const Tensor& x) {
  const auto& o = m->options;
  const auto& padding = std::get<torch::ExpandingArray<2>>(o.padding());
  const Tensor bias = m->bias.defined() ? cast_for(OpClass::kConvolution, m->bias) : Tensor();
  return torch::conv2d(cast_for(OpClass::kConvolution, x), cast_for(OpClass::kConvolution, m->weight), bias,
                       o.stride(), padding, o.dilation(), o.groups());
}

Tensor linear(const torch::nn::Linear& m, const Tensor& x) {
  const Tensor bias = m->bias.defined() ? cast_for(OpClass::kLinear, m->bias) : Tensor();
  return torch::linear(cast_for(OpClass::kLinear, x), cast_for(OpClass::kLinear, m->weight), bias);
}

Tensor norm(torch::nn::BatchNorm2d m, const Tensor& x) { return m->forward(cast_for(OpClass::kNormalization, x)); }

Tensor norm(torch::nn::LayerNorm m, const Tensor& x) { return m->forward(cast_for(OpClass::kNormalization, x)); }

Tensor resize_bilinear(const Tensor& x, std::int64_t height, std::int64_t width) {
  return F::interpolate(cast_for(OpClass::kInterpolation, x),
                        F::InterpolateFuncOptions()
                            .size(std::vector<std::int64_t>{height, width})
                            .mode(torch::kBilinear)
                            .align_corners(false));
}

// ------------------------------------------------------- ResNet-34 / U-Net

struct BasicBlockImpl : torch::nn::Module {
  BasicBlockImpl(std::int64_t in, std::int64_t out, std::int64_t stride) {
    conv1 = register_module("conv1", make_conv(in, out, 3, stride, 1, false));
    bn1 = register_module("bn1", torch::nn::BatchNorm2d(out));
    conv2 = register_module("conv2", make_conv(out, out, 3, 1, 1, false));
    bn2 = register_module("bn2", torch::nn::BatchNorm2d(out));
    if (stride != 1 || in != out) {
      down_conv = register_module("downsample_conv", make_conv(in, out, 1, stride, 0, false));
      down_bn = register_module("downsample_bn", torch::nn::BatchNorm2d(out));
    }
  }

  Tensor forward(const Tensor& x) {
    Tensor out = torch::relu(norm(bn1, conv(conv1, x)));
    out = norm(bn2, conv(conv2, out));
    const Tensor identity = down_conv ? norm(down_bn, conv(down_conv, x)) : cast_for(OpClass::kNormalization, x);
    return torch::relu(out + identity);
  }

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr}, down_conv{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr}, bn2{nullptr}, down_bn{nullptr};
};
TORCH_MODULE(BasicBlock);

struct ConvBnReluImpl : torch::nn::Module {
  ConvBnReluImpl(std::int64_t in, std::int64_t out) {
    conv = register_module("conv", make_conv(in, out, 3, 1, 1, false));
    bn = register_module("bn", torch::nn::BatchNorm2d(out));
  }
  Tensor forward(const Tensor& x) { return torch::relu(norm(bn, burnseg::conv(conv, x))); }

  torch::nn::Conv2d conv{nullptr};
  torch::nn::BatchNorm2d bn{nullptr};
};
TORCH_MODULE(ConvBnRelu);

struct UNetDecoderBlockImpl : torch::nn::Module {
  UNetDecoderBlockImpl(std::int64_t in, std::int64_t skip, std::int64_t out) {
    first = register_module("conv1", ConvBnRelu(in + skip, out));
    second = register_module("conv2", ConvBnRelu(out, out));
  }

  Tensor forward(const Tensor& x, const std::optional<Tensor>& skip) {
    Tensor y = resize_bilinear(x, x.size(2) * 2, x.size(3) * 2);
    if (skip) {
      y = torch::cat({y, cast_for(OpClass::kInterpolation, *skip)}, 1);
    }
    return second(first(y));
  }

  ConvBnRelu first{nullptr}, second{nullptr};
};
TORCH_MODULE(UNetDecoderBlock);

class UNetResNet34 : public TrunkImpl {
 public:
  explicit UNetResNet34(const ModelConfig& c) {
    const std::int64_t w64 = c.scaled(64);
    const std::int64_t widths[4] = {w64, c.scaled(128), c.scaled(256), c.scaled(512)};
    const int depths[4] = {3, 4, 6, 3};

    stem_conv_ = register_module("encoder_conv1", make_conv(c.in_channels, w64, 7, 2, 3, false));
    stem_bn_ = register_module("encoder_bn1", torch::nn::BatchNorm2d(w64));
    std::int64_t in = w64;
    for (int s = 0; s < 4; ++s) {
      torch::nn::ModuleList layer;
      for (int b = 0; b < depths[s]; ++b) {
        const std::int64_t stride = (b == 0 && s > 0) ? 2 : 1;
        layer->push_back(BasicBlock(in, widths[s], stride));
        in = widths[s];
      }
      layers_.push_back(register_module("encoder_layer" + std::to_string(s + 1), layer));
    }

    // Decoder: five x2 stages back to full resolution; the first four
    // concatenate encoder skips (layer3, layer2, layer1, stem).
    const std::int64_t skips[5] = {widths[2], widths[1], widths[0], w64, 0};
    const std::int64_t outs[5] = {c.scaled(256), c.scaled(128), c.scaled(64), c.scaled(32), c.scaled(16)};
    std::int64_t dec_in = widths[3];
    for (int i = 0; i < 5; ++i) {
      blocks_.push_back(register_module("decoder_block" + std::to_string(i + 1),
                                        UNetDecoderBlock(dec_in, skips[i], outs[i])));
      dec_in = outs[i];
    }
    out_channels_ = outs[4];
  }

  Tensor forward(const Tensor& x) override {
    const Tensor stem = torch::relu(norm(stem_bn_, conv(stem_conv_, x)));                   // /2
    Tensor y = F::max_pool2d(stem, F::MaxPool2dFuncOptions(3).stride(2).padding(1));       // /4
    std::vector<Tensor> features;
    for (auto& layer : layers_) {
      for (auto& block : *layer) {
        y = block->as<BasicBlock>()->forward(y);
      }
      features.push_back(y);  // /4, /8, /16, /32
    }
    const std::optional<Tensor> skips[5] = {features[2], features[1], features[0], stem, std::nullopt};
    Tensor d = features[3];
    for (int i = 0; i < 5; ++i) {
      d = blocks_[static_cast<std::size_t>(i)]->forward(d, skips[i]);
    }
    return d;
  }

  std::int64_t out_channels() const override { return out_channels_; }
  std::int64_t output_stride() const override { return 1; }

 private:
  torch::nn::Conv2d stem_conv_{nullptr};
  torch::nn::BatchNorm2d stem_bn_{nullptr};
  std::vector<torch::nn::ModuleList> layers_;
  std::vector<UNetDecoderBlock> blocks_;
  std::int64_t out_channels_ = 0;
};

// ----------------------------------------------------------- MiT / SegFormer

struct OverlapPatchEmbedImpl : torch::nn::Module {
  OverlapPatchEmbedImpl(std::int64_t in, std::int64_t dim, std::int64_t kernel, std::int64_t stride) {
    proj = register_module("proj", make_conv(in, dim, kernel, stride, kernel / 2, true));
    ln = register_module("norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
  }

  // Returns tokens B x N x C plus the token grid size.
  std::tuple<Tensor, std::int64_t, std::int64_t> forward(const Tensor& x) {
    const Tensor y = conv(proj, x);
    const std::int64_t h = y.size(2);
    const std::int64_t w = y.size(3);
    return {norm(ln, y.flatten(2).transpose(1, 2)), h, w};
  }

  torch::nn::Conv2d proj{nullptr};
  torch::nn::LayerNorm ln{nullptr};
};
TORCH_MODULE(OverlapPatchEmbed);

struct EfficientAttentionImpl : torch::nn::Module {
  EfficientAttentionImpl(std::int64_t dim, std::int64_t heads, std::int64_t sr_ratio)
      : dim(dim), heads(heads), sr_ratio(sr_ratio) {
    q = register_module("q", torch::nn::Linear(dim, dim));
    kv = register_module("kv", torch::nn::Linear(dim, 2 * dim));
    proj = register_module("proj", torch::nn::Linear(dim, dim));
    if (sr_ratio > 1) {
      sr = register_module("sr", make_conv(dim, dim, sr_ratio, sr_ratio, 0, true));
      sr_norm = register_module("sr_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
    }
  }

  Tensor forward(const Tensor& x, std::int64_t h, std::int64_t w) {
    const std::int64_t b = x.size(0);
    const std::int64_t n = x.size(1);
    const std::int64_t head_dim = dim / heads;
    const Tensor query = linear(q, x).reshape({b, n, heads, head_dim}).permute({0, 2, 1, 3});
    Tensor context = x;
    if (sr) {
      Tensor grid = x.transpose(1, 2).reshape({b, dim, h, w});
      context = norm(sr_norm, conv(sr, grid).flatten(2).transpose(1, 2));
    }
    const Tensor kv_out = linear(kv, context).reshape({b, -1, 2, heads, head_dim}).permute({2, 0, 3, 1, 4});
    const Tensor key = kv_out[0];
    const Tensor value = kv_out[1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    Tensor scores = torch::matmul(cast_for(OpClass::kMatMul, query), cast_for(OpClass::kMatMul, key).transpose(-2, -1));
    const Tensor attn = torch::softmax(cast_for(OpClass::kSoftmax, scores) * scale, -1);
    const Tensor out = torch::matmul(cast_for(OpClass::kMatMul, attn), cast_for(OpClass::kMatMul, value));
    return linear(proj, out.transpose(1, 2).reshape({b, n, dim}));
  }

  std::int64_t dim, heads, sr_ratio;
  torch::nn::Linear q{nullptr}, kv{nullptr}, proj{nullptr};
  torch::nn::Conv2d sr{nullptr};
  torch::nn::LayerNorm sr_norm{nullptr};
};
TORCH_MODULE(EfficientAttention);

struct MixFfnImpl : torch::nn::Module {
  MixFfnImpl(std::int64_t dim, std::int64_t hidden) {
    fc1 = register_module("fc1", torch::nn::Linear(dim, hidden));
    dwconv = register_module("dwconv", make_conv(hidden, hidden, 3, 1, 1, true, hidden));
    fc2 = register_module("fc2", torch::nn::Linear(hidden, dim));
  }

  Tensor forward(const Tensor& x, std::int64_t h, std::int64_t w) {
    const std::int64_t b = x.size(0);
    Tensor y = linear(fc1, x);
    const std::int64_t c = y.size(2);
    y = conv(dwconv, y.transpose(1, 2).reshape({b, c, h, w})).flatten(2).transpose(1, 2);
    return linear(fc2, torch::gelu(y));
  }

  torch::nn::Linear fc1{nullptr}, fc2{nullptr};
  torch::nn::Conv2d dwconv{nullptr};
};
TORCH_MODULE(MixFfn);

struct TransformerBlockImpl : torch::nn::Module {
  TransformerBlockImpl(std::int64_t dim, std::int64_t heads, std::int64_t sr_ratio, std::int64_t mlp_ratio) {
    norm1 = register_module("norm1", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
    attn = register_module("attn", EfficientAttention(dim, heads, sr_ratio));
    norm2 = register_module("norm2", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
    mlp = register_module("mlp", MixFfn(dim, dim * mlp_ratio));
  }

  Tensor forward(const Tensor& x, std::int64_t h, std::int64_t w) {
    Tensor y = cast_for(OpClass::kNormalization, x) + attn->forward(norm(norm1, x), h, w);
    return y + mlp->forward(norm(norm2, y), h, w);
  }

  torch::nn::LayerNorm norm1{nullptr}, norm2{nullptr};
  EfficientAttention attn{nullptr};
  MixFfn mlp{nullptr};
};
TORCH_MODULE(TransformerBlock);

std::int64_t compatible_heads(std::int64_t dim, std::int64_t heads) {
  while (heads > 1 && dim % heads != 0) {
    --heads;
  }
  return heads;
}

class SegFormerMiTB2 : public TrunkImpl {
 public:
  explicit SegFormerMiTB2(const ModelConfig& c) {
    const std::int64_t dims[4] = {c.scaled(64), c.scaled(128), c.scaled(320), c.scaled(512)};
    const std::int64_t heads[4] = {1, 2, 5, 8};
    const std::int64_t depths[4] = {3, 4, 6, 3};
    const std::int64_t sr[4] = {8, 4, 2, 1};
    const std::int64_t mlp_ratio = 4;
    decoder_channels_ = c.scaled(768);

    std::int64_t in = c.in_channels;
    for (int s = 0; s < 4; ++s) {
      const std::string prefix = "encoder_stage" + std::to_string(s + 1) + "_";
      embeds_.push_back(register_module(prefix + "patch_embed",
                                        OverlapPatchEmbed(in, dims[s], s == 0 ? 7 : 3, s == 0 ? 4 : 2)));
      torch::nn::ModuleList blocks;
      for (std::int64_t b = 0; b < depths[s]; ++b) {
        blocks->push_back(TransformerBlock(dims[s], compatible_heads(dims[s], heads[s]), sr[s], mlp_ratio));
      }
      stages_.push_back(register_module(prefix + "blocks", blocks));
      stage_norms_.push_back(
          register_module(prefix + "norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dims[s]}))));
      mlps_.push_back(register_module("decoder_linear_c" + std::to_string(s + 1),
                                      torch::nn::Linear(dims[s], decoder_channels_)));
      in = dims[s];
    }
    fuse_ = register_module("decoder_fuse", make_conv(4 * decoder_channels_, decoder_channels_, 1, 1, 0, false));
    fuse_bn_ = register_module("decoder_fuse_bn", torch::nn::BatchNorm2d(decoder_channels_));
  }

  Tensor forward(const Tensor& x) override {
    const std::int64_t b = x.size(0);
    Tensor y = x;
    std::vector<Tensor> features;
    for (std::size_t s = 0; s < 4; ++s) {
      auto [tokens, h, w] = embeds_[s]->forward(y);
      for (auto& block : *stages_[s]) {
        tokens = block->as<TransformerBlock>()->forward(tokens, h, w);
      }
      tokens = norm(stage_norms_[s], tokens);
      y = tokens.transpose(1, 2).reshape({b, -1, h, w});
      features.push_back(y);
    }

    const std::int64_t out_h = features[0].size(2);
    const std::int64_t out_w = features[0].size(3);
    std::vector<Tensor> projected;
    for (int s = 3; s >= 0; --s) {
      const Tensor& f = features[static_cast<std::size_t>(s)];
      Tensor p = linear(mlps_[static_cast<std::size_t>(s)], f.flatten(2).transpose(1, 2));
      p = p.transpose(1, 2).reshape({b, decoder_channels_, f.size(2), f.size(3)});
      if (s > 0) {
        p = resize_bilinear(p, out_h, out_w);
      }
      projected.push_back(cast_for(OpClass::kInterpolation, p));
    }
    return torch::relu(norm(fuse_bn_, conv(fuse_, torch::cat(projected, 1))));
  }

  std::int64_t out_channels() const override { return decoder_channels_; }
  std::int64_t output_stride() const override { return 4; }

 private:
  std::vector<OverlapPatchEmbed> embeds_;
  std::vector<torch::nn::ModuleList> stages_;
  std::vector<torch::nn::LayerNorm> stage_norms_;
  std::vector<torch::nn::Linear> mlps_;
  torch::nn::Conv2d fuse_{nullptr};
  torch::nn::BatchNorm2d fuse_bn_{nullptr};
  std::int64_t decoder_channels_ = 0;
};

std::shared_ptr<TrunkImpl> make_trunk(const ModelConfig& c) {
  switch (c.architecture) {
    case Architecture::kUNetResNet34: return std::make_shared<UNetResNet34>(c);
    case Architecture::kSegFormerMiTB2: return std::make_shared<SegFormerMiTB2>(c);
  }
  fail(ErrorCode::kBadConfig, "unknown architecture");
}

std::int64_t numel_sum(const std::vector<Tensor>& tensors) {
  std::int64_t n = 0;
  for (const Tensor& t : tensors) {
    n += t.numel();
  }
  return n;
}

}  // namespace

struct SegmentationModel::Root : torch::nn::Module {
  explicit Root(const ModelConfig& c) {
    trunk = register_module("trunk", make_trunk(c));
    ba_head = register_module("ba_head", make_conv(trunk->out_channels(), 1, 1, 1, 0, true));
    if (c.with_lc_head) {
      lc_head = register_module("lc_head", make_conv(trunk->out_channels(), c.num_lc_classes, 1, 1, 0, true));
    }
  }

  std::shared_ptr<TrunkImpl> trunk;
  torch::nn::Conv2d ba_head{nullptr};
  torch::nn::Conv2d lc_head{nullptr};
};

SegmentationModel::SegmentationModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  torch::manual_seed(config_.init_seed);
  root_ = std::make_shared<Root>(config_);
}

SegmentationModel::SegmentationModel(const ModelConfig& config, std::shared_ptr<Root> root)
    : config_(config), root_(std::move(root)) {}

ForwardOutput SegmentationModel::forward_raw(const Tensor& batch) {
  require(batch.dim() == 4, ErrorCode::kShapeError, "expected a B x C x H x W batch");
  require(batch.size(1) == config_.in_channels, ErrorCode::kShapeError,
          "expected " + std::to_string(config_.in_channels) + " input channels, got " + std::to_string(batch.size(1)));
  require(batch.size(2) % 32 == 0 && batch.size(3) % 32 == 0 && batch.size(2) > 0 && batch.size(3) > 0,
          ErrorCode::kShapeError, "H and W must be positive multiples of 32");
  require(torch::isfinite(batch).all().item<bool>(), ErrorCode::kNonfiniteInput, "input contains NaN or Inf");

  const Tensor features = root_->trunk->forward(batch);
  ForwardOutput out;
  out.ba_logits = conv(root_->ba_head, features).to(features.scalar_type() == torch::kDouble ? torch::kDouble : torch::kFloat);
  if (root_->lc_head) {
    out.lc_logits = conv(root_->lc_head, features).to(out.ba_logits.scalar_type());
  }
  return out;
}

ForwardOutput SegmentationModel::forward(const Tensor& batch) {
  ForwardOutput out = forward_raw(batch);
  if (root_->trunk->output_stride() != 1) {
    const std::int64_t h = batch.size(2);
    const std::int64_t w = batch.size(3);
    out.ba_logits = resize_bilinear(out.ba_logits, h, w);
    if (out.lc_logits) {
      out.lc_logits = resize_bilinear(*out.lc_logits, h, w);
    }
  }
  return out;
}

std::int64_t SegmentationModel::count_params() const { return numel_sum(parameters()); }

std::int64_t SegmentationModel::lc_head_params() const { return numel_sum(lc_head_parameters()); }

std::vector<Tensor> SegmentationModel::parameters() const { return root_->parameters(); }

torch::OrderedDict<std::string, Tensor> SegmentationModel::named_parameters() const {
  return root_->named_parameters();
}

torch::OrderedDict<std::string, Tensor> SegmentationModel::named_buffers() const { return root_->named_buffers(); }

std::vector<Tensor> SegmentationModel::trunk_parameters() const { return root_->trunk->parameters(); }

std::vector<Tensor> SegmentationModel::ba_head_parameters() const { return root_->ba_head->parameters(); }

std::vector<Tensor> SegmentationModel::lc_head_parameters() const {
  return root_->lc_head ? root_->lc_head->parameters() : std::vector<Tensor>{};
}

torch::nn::Module& SegmentationModel::module() { return *root_; }

void SegmentationModel::train(bool on) { root_->train(on); }

bool SegmentationModel::is_training() const { return root_->is_training(); }

void SegmentationModel::to(torch::Dtype dtype) { root_->to(dtype); }

void SegmentationModel::copy_state_from(const SegmentationModel& other) {
  torch::NoGradGuard no_grad;
  auto src_params = other.root_->named_parameters();
  for (auto& item : root_->named_parameters()) {
    const Tensor* src = src_params.find(item.key());
    require(src != nullptr, ErrorCode::kBadConfig, "missing parameter '" + item.key() + "'");
    item.value().copy_(*src);
  }
  auto src_buffers = other.root_->named_buffers();
  for (auto& item : root_->named_buffers()) {
    const Tensor* src = src_buffers.find(item.key());
    require(src != nullptr, ErrorCode::kBadConfig, "missing buffer '" + item.key() + "'");
    item.value().copy_(*src);
  }
  root_->train(other.root_->is_training());
}

SegmentationModel SegmentationModel::drop_lc_head() const {
  require(config_.with_lc_head, ErrorCode::kNoLcHead, "model has no land-cover head");
  ModelConfig stl = config_;
  stl.with_lc_head = false;
  SegmentationModel out(stl);
  out.copy_state_from(*this);
  return out;
}

SegmentationModel SegmentationModel::clone() const {
  SegmentationModel out(config_);
  out.copy_state_from(*this);
  return out;
}

SegmentationModel build_model(const ModelConfig& config) { return SegmentationModel(config); }

std::int64_t count_params(const SegmentationModel& model) { return model.count_params(); }

SegmentationModel drop_lc_head(const SegmentationModel& model) { return model.drop_lc_head(); }

}  // namespace burnseg
