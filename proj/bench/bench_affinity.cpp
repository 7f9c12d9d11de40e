// Copyright (c) 2026 The msdiar Authors
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

// Serial reference vs. OpenMP kernels for the affinity stage.
//
//   OMP_NUM_THREADS=4 ./build/bench/msdiar_bench

#include <random>

#include <benchmark/benchmark.h>

#include "msdiar/affinity.hpp"
#include "msdiar/clustering.hpp"
#include "msdiar/reference/affinity_reference.hpp"

namespace {

msdiar::EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> data(rows * dim);
  for (auto& x : data) x = g(rng);
  return {rows, dim, std::move(data)};
}

void BM_CosineReference(benchmark::State& state) {
  const auto e = random_embeddings(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) {
    auto a = msdiar::reference::cosine_affinity(e);
    benchmark::DoNotOptimize(a.data().data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_CosineOpenMP(benchmark::State& state) {
  const auto e = random_embeddings(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) {
    auto a = msdiar::cosine_affinity(e);
    benchmark::DoNotOptimize(a.data().data());
  }
  state.SetComplexityN(state.range(0));
}

std::vector<msdiar::AffinityMatrix> three_scales(std::size_t n) {
  std::vector<msdiar::AffinityMatrix> out;
  for (std::size_t s = 0; s < 3; ++s) out.push_back(msdiar::cosine_affinity(random_embeddings(n, 64 + s)));
  return out;
}

void BM_FuseReference(benchmark::State& state) {
  const auto mats = three_scales(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> w{1.0, 1.0, 1.0};
  for (auto _ : state) {
    auto f = msdiar::reference::fuse_affinities(mats, w);
    benchmark::DoNotOptimize(f.data().data());
  }
}

void BM_FuseOpenMP(benchmark::State& state) {
  const auto mats = three_scales(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> w{1.0, 1.0, 1.0};
  for (auto _ : state) {
    auto f = msdiar::fuse_affinities(mats, w);
    benchmark::DoNotOptimize(f.data().data());
  }
}

void BM_Ahc(benchmark::State& state) {
  const auto a = msdiar::cosine_affinity(random_embeddings(static_cast<std::size_t>(state.range(0)), 64));
  for (auto _ : state) {
    auto r = msdiar::ahc(a, {0.3, 1, 1000});
    benchmark::DoNotOptimize(r.labels.data());
  }
}

}  // namespace

BENCHMARK(BM_CosineReference)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CosineOpenMP)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuseReference)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuseOpenMP)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ahc)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
