// Copyright 2026 The Augerino Authors
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

#include "augerino/lie.hpp"
#include "augerino/model.hpp"
#include "augerino/network.hpp"
#include "augerino/ops.hpp"
#include "augerino/warp.hpp"

namespace {

using namespace augerino;

Tensor filled(Shape shape, double seed) {
  std::vector<double> v(shape_numel(shape));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(seed + 0.37 * static_cast<double>(i));
  return Tensor::from(std::move(shape), std::move(v));
}

void BM_Expm3(benchmark::State& state) {
  const Tensor a = filled({3, 3}, 1.0);
  NoGradScope no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm3);

void BM_ExpmBackward(benchmark::State& state) {
  const Tensor a = filled({64, 3, 3}, 2.0);
  for (auto _ : state) {
    Tensor x = a.detach();
    x.set_requires_grad(true);
    Tape::current().backward(sum(expm(x)));
    benchmark::DoNotOptimize(x.grad());
    reset_tape();
  }
}
BENCHMARK(BM_ExpmBackward);

void BM_Warp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor x = filled({64, 1, n, n}, 3.0);
  const auto basis = GeneratorBasis::affine2d();
  Rng rng(1);
  const Tensor g = sample_affine(Tensor::from({6}, {0.1, 0.1, 0.8, 0.1, 0.1, 0.1}), basis, sample_eps(rng, 64, 6));
  NoGradScope no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(warp(x, g));
}
BENCHMARK(BM_Warp)->Arg(16)->Arg(32);

void BM_Conv2d(benchmark::State& state) {
  const Tensor x = filled({64, 8, 16, 16}, 4.0);
  const Tensor k = filled({16, 8, 3, 3}, 5.0);
  NoGradScope no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, k, 1, 1));
}
BENCHMARK(BM_Conv2d);

void BM_TrainLoss(benchmark::State& state) {
  NetworkSpec spec;
  spec.input_size = 16;
  spec.output_dim = 4;
  Rng rng(2);
  AugerinoModel m;
  m.network = Network::build(spec, rng);
  m.aug = AugParams::with_widths({0, 0, 0.8, 0, 0, 0}, {0, 0, 1, 0, 0, 0});
  Batch b;
  b.inputs = filled({64, 1, 16, 16}, 6.0);
  b.labels.assign(64, 1);
  for (auto _ : state) {
    const Tensor eps = sample_eps(rng, 64, m.eps_dim());
    const Tensor loss = train_loss(m, b, eps, 1).total;
    Tape::current().backward(loss);
    benchmark::DoNotOptimize(loss);
    reset_tape();
  }
}
BENCHMARK(BM_TrainLoss);

}  // namespace

BENCHMARK_MAIN();
