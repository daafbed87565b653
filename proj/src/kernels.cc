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

#include "dpqr/kernels.h"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace dpqr::kernels {
namespace {

constexpr std::size_t kParallelRowScoreWork = 1u << 14;

int DefaultWorkers() {
  if (const char* env = std::getenv("DPQR_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
}

std::atomic<int>& WorkerSetting() {
  static std::atomic<int> workers{DefaultWorkers()};
  return workers;
}

// Per-row work shared by both variants so their outputs are bit-identical.
inline double RowDot(const QueryWorkload& w, std::size_t i,
                     std::span<const double> v) {
  const std::span<const double> row = w.row(i);
  double s = 0.0;
  for (std::size_t z = 0; z < row.size(); ++z) s += row[z] * v[z];
  return s;
}

inline void RowDistances(const QueryWorkload& w, std::size_t i, double& d1,
                         double& dinf) {
  const std::span<const double> a = w.row(i);
  for (std::size_t j = i + 1; j < w.m(); ++j) {
    const std::span<const double> b = w.row(j);
    double l1 = 0.0;
    double linf = 0.0;
    for (std::size_t z = 0; z < a.size(); ++z) {
      const double d = std::abs(a[z] - b[z]);
      l1 += d;
      linf = std::max(linf, d);
    }
    d1 = std::max(d1, l1);
    dinf = std::max(dinf, linf);
  }
}

}  // namespace

int NumWorkers() { return WorkerSetting().load(); }

void SetNumWorkers(int workers) {
  WorkerSetting().store(workers > 0 ? workers : DefaultWorkers());
}

namespace serial {

void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out) {
  for (std::size_t i = 0; i < w.m(); ++i) out[i] = RowDot(w, i, v);
}

Diameters PairwiseDiameters(const QueryWorkload& w) {
  Diameters d;
  for (std::size_t i = 0; i < w.m(); ++i) RowDistances(w, i, d.d1, d.dinf);
  return d;
}

}  // namespace serial

namespace omp {

void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out) {
  const long long m = static_cast<long long>(w.m());
#pragma omp parallel for schedule(static) num_threads(NumWorkers())
  for (long long i = 0; i < m; ++i) {
    out[static_cast<std::size_t>(i)] = RowDot(w, static_cast<std::size_t>(i), v);
  }
}

Diameters PairwiseDiameters(const QueryWorkload& w) {
  const long long m = static_cast<long long>(w.m());
  double d1 = 0.0;
  double dinf = 0.0;
  // max is exact, so the reduction order does not affect the result.
#pragma omp parallel for schedule(dynamic) reduction(max : d1, dinf) \
    num_threads(NumWorkers())
  for (long long i = 0; i < m; ++i) {
    RowDistances(w, static_cast<std::size_t>(i), d1, dinf);
  }
  return {d1, dinf};
}

}  // namespace omp

void RowScores(const QueryWorkload& w, std::span<const double> v,
               std::span<double> out) {
  if (w.m() * w.k() >= kParallelRowScoreWork && !omp_in_parallel()) {
    omp::RowScores(w, v, out);
  } else {
    serial::RowScores(w, v, out);
  }
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace dpqr::kernels
