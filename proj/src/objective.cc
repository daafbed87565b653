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

#include "dpqr/objective.h"

#include <cmath>
#include <limits>

#include "dpqr/entropy.h"

namespace dpqr {
namespace {

void CheckSize(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has length " + std::to_string(got) +
                    ", expected " + std::to_string(want));
  }
}

// max over rows of <q, v>, with the selected row.
std::pair<double, std::size_t> MaxRowScore(const QueryWorkload& w,
                                           std::span<const double> v) {
  std::vector<double> scores(w.m());
  kernels::RowScores(w, v, scores);
  const std::size_t best = kernels::ArgMax(scores);
  return {scores[best], best};
}

}  // namespace

namespace internal {

MonteCarloEstimate MergeChunks(std::span<const ChunkStats> chunks) {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (const ChunkStats& c : chunks) {
    if (c.count == 0) continue;
    const std::size_t total = count + c.count;
    const double delta = c.mean - mean;
    mean += delta * static_cast<double>(c.count) / static_cast<double>(total);
    m2 += c.m2 + delta * delta * static_cast<double>(count) *
                     static_cast<double>(c.count) / static_cast<double>(total);
    count = total;
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = count;
  est.std_error =
      count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) /
                            static_cast<double>(count))
                : 0.0;
  return est;
}

}  // namespace internal

double Phi(std::span<const double> d, std::span<const double> ref,
           const QueryWorkload& w) {
  CheckSize(d.size(), w.k(), "d");
  CheckSize(ref.size(), w.k(), "ref");
  std::vector<double> diff(w.k());
  for (std::size_t z = 0; z < w.k(); ++z) diff[z] = ref[z] - d[z];
  return MaxRowScore(w, diff).first;
}

double Phi(const SimplexVector& d, const SimplexVector& ref,
           const QueryWorkload& w) {
  return Phi(d.values(), ref.values(), w);
}

double PhiAlpha(const SimplexVector& d, const SimplexVector& ref,
                const QueryWorkload& w, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidAlpha, "alpha < 0");
  return Phi(d, ref, w) + alpha * NegEntropy(d);
}

double PsiAlpha(std::span<const double> q, const SimplexVector& ref,
                double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidAlpha, "alpha <= 0");
  CheckSize(q.size(), ref.size(), "q");
  std::vector<double> scaled(q.size());
  for (std::size_t z = 0; z < q.size(); ++z) scaled[z] = q[z] / alpha;
  return Dot(q, ref.values()) - alpha * LogSumExp(scaled);
}

std::vector<double> GradPsiHat(std::span<const double> q,
                               const SimplexVector& emp, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidAlpha, "alpha <= 0");
  CheckSize(q.size(), emp.size(), "q");
  std::vector<double> scaled(q.size());
  for (std::size_t z = 0; z < q.size(); ++z) scaled[z] = q[z] / alpha;
  const SimplexVector p = Softmax(scaled);
  std::vector<double> grad(q.size());
  for (std::size_t z = 0; z < q.size(); ++z) grad[z] = emp[z] - p[z];
  return grad;
}

double FWGap(std::span<const double> q, const SimplexVector& ref, double alpha,
             const QueryWorkload& w) {
  CheckSize(q.size(), w.k(), "q");
  const std::vector<double> grad = GradPsiHat(q, ref, alpha);
  return MaxRowScore(w, grad).first - Dot(grad, q);
}

OracleSample SmoothedOracle(std::span<const double> d, const SimplexVector& emp,
                            const QueryWorkload& w, double sigma,
                            NoiseStream& rng, bool zero_noise) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma <= 0");
  CheckSize(d.size(), w.k(), "d");
  CheckSize(emp.size(), w.k(), "emp");
  OracleSample out;
  out.xi = zero_noise ? std::vector<double>(w.k(), 0.0)
                      : SampleGaussianVec(w.k(), sigma, rng);
  std::vector<double> target(w.k());
  for (std::size_t z = 0; z < w.k(); ++z) target[z] = emp[z] - d[z] + out.xi[z];
  out.row = MaxRowScore(w, target).second;
  out.g.resize(w.k());
  const std::span<const double> row = w.row(out.row);
  for (std::size_t z = 0; z < w.k(); ++z) out.g[z] = -row[z] + 0.0;
  return out;
}

WidthEstimate GaussianWidthMC(const QueryWorkload& w, std::size_t samples,
                              const NoiseStream& rng) {
  return GaussianMonteCarlo(w.k(), 1.0, samples, rng,
                            [&](std::span<const double> xi) {
                              std::vector<double> scores(w.m());
                              kernels::serial::RowScores(w, xi, scores);
                              return scores[kernels::ArgMax(scores)];
                            });
}

MonteCarloEstimate PhiSigmaMC(std::span<const double> d,
                              const SimplexVector& ref, const QueryWorkload& w,
                              double sigma, std::size_t samples,
                              const NoiseStream& rng) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma <= 0");
  CheckSize(d.size(), w.k(), "d");
  CheckSize(ref.size(), w.k(), "ref");
  return GaussianMonteCarlo(
      w.k(), sigma, samples, rng, [&](std::span<const double> xi) {
        std::vector<double> diff(w.k());
        for (std::size_t z = 0; z < w.k(); ++z) diff[z] = ref[z] - d[z] - xi[z];
        std::vector<double> scores(w.m());
        kernels::serial::RowScores(w, diff, scores);
        return scores[kernels::ArgMax(scores)];
      });
}

double MaxQueryError(const SimplexVector& ref, const SimplexVector& priv,
                     const QueryWorkload& w) {
  return Phi(priv, ref, w);
}

std::vector<double> QueryAnswers(const QueryWorkload& w,
                                 const SimplexVector& dist) {
  CheckSize(dist.size(), w.k(), "distribution");
  std::vector<double> out(w.m());
  kernels::RowScores(w, dist.values(), out);
  return out;
}

}  // namespace dpqr
