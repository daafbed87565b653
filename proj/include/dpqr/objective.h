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

#ifndef DPQR_OBJECTIVE_H_
#define DPQR_OBJECTIVE_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/kernels.h"
#include "dpqr/mechanisms.h"

namespace dpqr {

// phi(d) = max over rows q of <q, ref - d>. Accepts arbitrary real vectors
// (the smoothed objective evaluates it at d + xi).
double Phi(std::span<const double> d, std::span<const double> ref,
           const QueryWorkload& w);
double Phi(const SimplexVector& d, const SimplexVector& ref,
           const QueryWorkload& w);

// phi(d) + alpha H(d).
double PhiAlpha(const SimplexVector& d, const SimplexVector& ref,
                const QueryWorkload& w, double alpha);

// psi_alpha(q) = <q, ref> - alpha log_sum_exp(q / alpha).
double PsiAlpha(std::span<const double> q, const SimplexVector& ref,
                double alpha);

// emp - softmax(q / alpha): the plug-in gradient of psi_alpha.
std::vector<double> GradPsiHat(std::span<const double> q,
                               const SimplexVector& emp, double alpha);

// max over rows s of <ref - softmax(q/alpha), s - q>.
double FWGap(std::span<const double> q, const SimplexVector& ref, double alpha,
             const QueryWorkload& w);

struct OracleSample {
  // Descent direction for the primal: minus the selected row.
  std::vector<double> g;
  std::vector<double> xi;
  std::size_t row;
};

// Draws xi ~ N(0, sigma^2 I) and selects argmax_q <q, emp - d + xi> over the
// rows. With zero_noise set, xi is forced to 0 (non-private debug hook) and
// the stream is not consumed.
OracleSample SmoothedOracle(std::span<const double> d, const SimplexVector& emp,
                            const QueryWorkload& w, double sigma,
                            NoiseStream& rng, bool zero_noise = false);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

using WidthEstimate = MonteCarloEstimate;

inline constexpr std::size_t kMonteCarloChunk = 1024;

// Mean and standard error of f(xi) over `samples` draws of a k-dimensional
// N(0, sigma^2 I) vector. Chunk c draws from rng.Derive("chunk", c); chunk
// statistics are merged in index order.
template <class F>
MonteCarloEstimate GaussianMonteCarlo(std::size_t k, double sigma,
                                      std::size_t samples,
                                      const NoiseStream& rng, F&& f);

// E max over rows of <q, xi>, xi standard normal. Samples are split into
// fixed-size chunks with derived substreams, so the estimate does not depend
// on the worker count.
WidthEstimate GaussianWidthMC(const QueryWorkload& w, std::size_t samples,
                              const NoiseStream& rng);

// E phi(d + xi), xi ~ N(0, sigma^2 I).
MonteCarloEstimate PhiSigmaMC(std::span<const double> d,
                              const SimplexVector& ref, const QueryWorkload& w,
                              double sigma, std::size_t samples,
                              const NoiseStream& rng);

// max over rows of <q, ref - priv>.
double MaxQueryError(const SimplexVector& ref, const SimplexVector& priv,
                     const QueryWorkload& w);

// <q, dist> for every row.
std::vector<double> QueryAnswers(const QueryWorkload& w,
                                 const SimplexVector& dist);

namespace internal {

struct ChunkStats {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
};

MonteCarloEstimate MergeChunks(std::span<const ChunkStats> chunks);

}  // namespace internal

template <class F>
MonteCarloEstimate GaussianMonteCarlo(std::size_t k, double sigma,
                                      std::size_t samples,
                                      const NoiseStream& rng, F&& f) {
  if (samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 samples");
  }
  const std::size_t num_chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<internal::ChunkStats> chunks(num_chunks);
  kernels::ForEachChunk(num_chunks, [&](std::size_t c) {
    NoiseStream local = rng.Derive("chunk", c);
    const std::size_t begin = c * kMonteCarloChunk;
    const std::size_t end = std::min(samples, begin + kMonteCarloChunk);
    std::vector<double> xi(k);
    internal::ChunkStats& st = chunks[c];
    for (std::size_t s = begin; s < end; ++s) {
      for (double& v : xi) v = sigma * local.NextNormal();
      const double x = f(std::span<const double>(xi));
      ++st.count;
      const double delta = x - st.mean;
      st.mean += delta / static_cast<double>(st.count);
      st.m2 += delta * (x - st.mean);
    }
  });
  return internal::MergeChunks(chunks);
}

}  // namespace dpqr

#endif  // DPQR_OBJECTIVE_H_
