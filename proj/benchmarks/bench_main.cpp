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


// Latency benchmarks: model forward, TTA patch inference, patchify/mosaic.

#include <benchmark/benchmark.h>
#include <torch/torch.h>

#include <cstdint>
#include <random>
#include <vector>

#include "burnseg/models.hpp"
#include "burnseg/patching.hpp"
#include "burnseg/precision.hpp"
#include "burnseg/raster.hpp"
#include "burnseg/tta.hpp"

namespace {

using namespace burnseg;

SegmentationModel bench_model(Architecture arch, double width) {
  ModelConfig c;
  c.architecture = arch;
  c.width_scale = width;
  c.init_seed = 1;
  SegmentationModel m(c);
  m.eval();
  return m;
}

BandStats unit_stats() { return BandStats{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}; }

RasterGrid random_map(std::int64_t w, std::int64_t h) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(w * h));
  for (float& x : v) x = u(rng);
  return RasterGrid(w, h, 1, GeoTransform{0, 0, 10, 10, "EPSG:32634"}, RasterKind::kProbabilityMap, std::move(v),
                    std::nullopt, SampleType::kFloat32);
}

// args: patch size, mixed precision
void BM_ForwardUNet(benchmark::State& state) {
  torch::NoGradGuard ng;
  SegmentationModel m = bench_model(Architecture::kUNetResNet34, 0.25);
  const std::int64_t size = state.range(0);
  const torch::Tensor x = torch::randn({1, 4, size, size});
  const PrecisionScope scope(state.range(1) ? PrecisionPolicy::mixed_half() : PrecisionPolicy::full());
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x).ba_logits);
}
BENCHMARK(BM_ForwardUNet)->Args({64, 0})->Args({64, 1})->Args({128, 0})->Unit(benchmark::kMillisecond);

void BM_ForwardSegFormer(benchmark::State& state) {
  torch::NoGradGuard ng;
  SegmentationModel m = bench_model(Architecture::kSegFormerMiTB2, 0.25);
  const std::int64_t size = state.range(0);
  const torch::Tensor x = torch::randn({1, 4, size, size});
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x).ba_logits);
}
BENCHMARK(BM_ForwardSegFormer)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// arg: TTA on
void BM_TtaPatch(benchmark::State& state) {
  const Predictor p = model_predictor(bench_model(Architecture::kUNetResNet34, 0.1), unit_stats(), false);
  TtaConfig tta;
  tta.enabled = state.range(0) != 0;
  const torch::Tensor batch = torch::rand({4, 4, 64, 64});
  for (auto _ : state) benchmark::DoNotOptimize(tta_predict_batch(p, batch, tta));
  state.SetItemsProcessed(state.iterations() * batch.size(0));
}
BENCHMARK(BM_TtaPatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// args: scene side, overlap percent
void BM_Patchify(benchmark::State& state) {
  const RasterGrid r = random_map(state.range(0), state.range(0));
  const PatchSpec spec{128, static_cast<double>(state.range(1)) / 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(patchify(r, spec));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(r.values().size() * sizeof(float)));
}
BENCHMARK(BM_Patchify)->Args({1024, 0})->Args({1024, 20})->Unit(benchmark::kMillisecond);

void BM_Mosaic(benchmark::State& state) {
  const RasterGrid r = random_map(state.range(0), state.range(0));
  const PatchSet set = patchify(r, PatchSpec{128, static_cast<double>(state.range(1)) / 100.0});
  for (auto _ : state) benchmark::DoNotOptimize(mosaic(set));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(r.values().size() * sizeof(float)));
}
BENCHMARK(BM_Mosaic)->Args({1024, 0})->Args({1024, 20})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
