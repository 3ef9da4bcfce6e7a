// Copyright 2026 The arfdcn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "arfdcn/attention.h"
#include "arfdcn/conv.h"
#include "arfdcn/model.h"
#include "arfdcn/msf.h"
#include "arfdcn/ops.h"
#include "arfdcn/rng.h"

namespace {

using namespace arfdcn;

Tensor random_tensor(Shape shape, Rng& rng) {
  std::vector<double> data(static_cast<std::size_t>(shape_size(shape)));
  for (double& v : data) v = rng.uniform(-1.0, 1.0);
  return Tensor(std::move(shape), std::move(data));
}

void BM_Conv1dPointwise(benchmark::State& state) {
  const std::int64_t channels = state.range(0);
  const std::int64_t len = state.range(1);
  Rng rng(1);
  Tensor x = random_tensor({channels, len}, rng);
  Tensor w = random_tensor({channels, channels, 1}, rng);
  Tensor b = random_tensor({channels}, rng);
  Conv1dSpec spec;
  spec.in_channels = channels;
  spec.out_channels = channels;
  spec.kernel = 1;
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor y = conv1d(x, w, b, spec);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * channels * channels * len);
}
BENCHMARK(BM_Conv1dPointwise)->Args({128, 3200})->Args({512, 3200});

void BM_Conv1dDilated(benchmark::State& state) {
  const std::int64_t dilation = state.range(0);
  Rng rng(2);
  Tensor x = random_tensor({128, 1600}, rng);
  Tensor w = random_tensor({128, 128, 5}, rng);
  Tensor b = random_tensor({128}, rng);
  const Conv1dSpec spec = Conv1dSpec::same(128, 128, 5, 2, dilation, 1600);
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor y = conv1d(x, w, b, spec);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Conv1dDilated)->Arg(1)->Arg(4)->Arg(16);

void BM_MsfBlock(benchmark::State& state) {
  Rng rng(3);
  MsfBlockParams p = MsfBlockParams::init(512, 128, 5, true, rng);
  Tensor x = random_tensor({512, 3200}, rng);
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor y = msf_block(x, p);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_MsfBlock)->Unit(benchmark::kMillisecond);

void BM_ChannelAttention(benchmark::State& state) {
  Rng rng(4);
  ChannelAttentionParams p = ChannelAttentionParams::init(rng);
  Tensor x = random_tensor({512, 3200}, rng);
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor y = channel_attention(x, p);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ChannelAttention)->Unit(benchmark::kMillisecond);

void BM_ForwardDefault(benchmark::State& state) {
  Model model(ModelConfig{}, 1);
  Rng rng(5);
  Tensor wave = random_tensor({1, 32000}, rng);
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor y = model.forward(wave);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ForwardDefault)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
