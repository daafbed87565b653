// Copyright 2026 The dpqr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "dpqr/core.h"
#include "dpqr/harness.h"
#include "dpqr/kernels.h"
#include "dpqr/mechanisms.h"
#include "dpqr/objective.h"

namespace {

dpqr::QueryWorkload MakeWorkload(std::size_t k, std::size_t m) {
  dpqr::NoiseStream rng(7, "bench-workload");
  return dpqr::GenWorkload(k, m, dpqr::WorkloadSpec::Parse("random_box"), rng);
}

void BM_RowScoresSerial(benchmark::State& state) {
  const auto w = MakeWorkload(state.range(0), state.range(1));
  std::vector<double> v(w.k(), 0.5), out(w.m());
  for (auto _ : state) {
    dpqr::kernels::serial::RowScores(w, v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_RowScoresOmp(benchmark::State& state) {
  const auto w = MakeWorkload(state.range(0), state.range(1));
  std::vector<double> v(w.k(), 0.5), out(w.m());
  for (auto _ : state) {
    dpqr::kernels::omp::RowScores(w, v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_DiametersSerial(benchmark::State& state) {
  const auto w = MakeWorkload(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpqr::kernels::serial::PairwiseDiameters(w));
  }
}

void BM_DiametersOmp(benchmark::State& state) {
  const auto w = MakeWorkload(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpqr::kernels::omp::PairwiseDiameters(w));
  }
}

// Monte Carlo width with one worker versus the default pool.
void BM_WidthMC(benchmark::State& state) {
  const auto w = MakeWorkload(64, 128);
  const int saved = dpqr::kernels::NumWorkers();
  if (state.range(0) > 0) dpqr::kernels::SetNumWorkers(state.range(0));
  const dpqr::NoiseStream rng(11, "bench-width");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpqr::GaussianWidthMC(w, 20000, rng));
  }
  dpqr::kernels::SetNumWorkers(saved);
}

}  // namespace

BENCHMARK(BM_RowScoresSerial)->Args({64, 256})->Args({1024, 1024});
BENCHMARK(BM_RowScoresOmp)->Args({64, 256})->Args({1024, 1024});
BENCHMARK(BM_DiametersSerial)->Args({16, 64})->Args({64, 512});
BENCHMARK(BM_DiametersOmp)->Args({16, 64})->Args({64, 512});
BENCHMARK(BM_WidthMC)->Arg(1)->Arg(0);

BENCHMARK_MAIN();
