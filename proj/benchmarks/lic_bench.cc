// Copyright 2026 The LIC Authors. All Rights Reserved.
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

#include <benchmark/benchmark.h>

#include <vector>

#include "lic/codec.h"
#include "lic/corpus.h"
#include "lic/entropy_model.h"
#include "lic/image.h"
#include "lic/network.h"
#include "lic/range_coder.h"
#include "lic/refine.h"
#include "lic/rng.h"
#include "lic/tape.h"

namespace lic {
namespace {

Tensor Random(const Shape& shape, uint64_t seed) {
  Tensor t(shape);
  CounterRng rng(seed);
  for (float& v : t.data()) v = static_cast<float>(rng.NextUniform() - 0.5);
  return t;
}

void BM_Conv2dForward(benchmark::State& state) {
  const int64_t size = state.range(0);
  const Tensor x = Random({1, 32, size, size}, 1);
  const Tensor k = Random({64, 32, 5, 5}, 2);
  for (auto _ : state) {
    Tape<float> tape;
    const Var y = tape.Conv2d(tape.Leaf(x), tape.Leaf(k), 2, PadSpec{2, 2});
    benchmark::DoNotOptimize(tape.value(y).data().data());
  }
  state.SetItemsProcessed(state.iterations() * size * size / 4 * 64 * 32 * 25);
}
BENCHMARK(BM_Conv2dForward)->Arg(32)->Arg(64);

void BM_EncodeForward(benchmark::State& state) {
  const ModelParams model = InitializeModel(ArchitectureConfig{}, 0.01, 1);
  const Tensor x = ImageToTensor(
      SyntheticImage(CorpusKind::kMixed, 64, 64, 1, 0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(EncodeForward(model, x).data().data());
  }
}
BENCHMARK(BM_EncodeForward);

void BM_RangeCoderEncode(benchmark::State& state) {
  FactorizedPrior prior = FactorizedPrior::Create(8);
  for (int c = 0; c < 8; ++c) prior.log_scale[c] = 0.3f * c;
  const CdfTables tables = BuildCdfTables(prior);
  CounterRng rng(3);
  std::vector<int32_t> values(100000), channels(100000);
  for (size_t i = 0; i < values.size(); ++i) {
    channels[i] = static_cast<int32_t>(i % 8);
    values[i] = static_cast<int32_t>(rng.NextBelow(9)) - 4;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(EncodeSymbols(values, channels, tables).data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(values.size()));
}
BENCHMARK(BM_RangeCoderEncode);

void BM_RangeCoderDecode(benchmark::State& state) {
  FactorizedPrior prior = FactorizedPrior::Create(8);
  for (int c = 0; c < 8; ++c) prior.log_scale[c] = 0.3f * c;
  const CdfTables tables = BuildCdfTables(prior);
  CounterRng rng(3);
  std::vector<int32_t> values(100000), channels(100000);
  for (size_t i = 0; i < values.size(); ++i) {
    channels[i] = static_cast<int32_t>(i % 8);
    values[i] = static_cast<int32_t>(rng.NextBelow(9)) - 4;
  }
  const std::vector<uint8_t> bytes = EncodeSymbols(values, channels, tables);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DecodeSymbols(bytes, channels, tables).data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(values.size()));
}
BENCHMARK(BM_RangeCoderDecode);

// Cost of one refinement step on a 64x64 image, amortized over MAX steps.
void BM_RefineStep(benchmark::State& state) {
  const ModelParams model = InitializeModel(ArchitectureConfig{}, 0.01, 1);
  const Tensor x = ImageToTensor(
      SyntheticImage(CorpusKind::kMixed, 64, 64, 1, 0));
  const Tensor y0 = EncodeForward(model, x);
  RefineConfig cfg;
  cfg.max_steps = 50;
  cfg.eval_every = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RefineLatents(y0, x, model, cfg).latents.data().data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.max_steps);
}
BENCHMARK(BM_RefineStep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lic

BENCHMARK_MAIN();
