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

#ifndef DPQR_KERNELS_H_
#define DPQR_KERNELS_H_

#include <cstddef>
#include <span>

#include "dpqr/core.h"

// Data-parallel inner loops. `serial` is the reference implementation; `omp`
// splits work across OpenMP threads without changing the per-element
// arithmetic, so both produce bit-identical results for any worker count.
namespace dpqr::kernels {

// Worker count used by the OpenMP kernels. Defaults to the DPQR_WORKERS
// environment variable if set, otherwise to the OpenMP default.
int NumWorkers();
void SetNumWorkers(int workers);

namespace serial {

// out[i] = <row_i, v>.
void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out);
Diameters PairwiseDiameters(const QueryWorkload& w);

}  // namespace serial

namespace omp {

void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out);
Diameters PairwiseDiameters(const QueryWorkload& w);

}  // namespace omp

// Dispatches to omp:: above a size threshold, serial:: below it.
void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out);

// First index of the maximum; ties go to the lowest index.
std::size_t ArgMax(std::span<const double> values);

// Runs body(chunk) for chunk in [0, num_chunks) across the worker pool.
// Chunks must write to disjoint outputs; callers merge in index order.
template <class Body>
void ForEachChunk(std::size_t num_chunks, Body&& body) {
  const long long count = static_cast<long long>(num_chunks);
#pragma omp parallel for schedule(static) num_threads(NumWorkers())
  for (long long c = 0; c < count; ++c) body(static_cast<std::size_t>(c));
}

}  // namespace dpqr::kernels

#endif  // DPQR_KERNELS_H_
