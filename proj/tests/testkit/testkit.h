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

#ifndef DPQR_TESTKIT_TESTKIT_H_
#define DPQR_TESTKIT_TESTKIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/entropy.h"

// Brute-force reference solvers. They evaluate objectives from scratch and
// draw randomness from the standard library, never from dpqr's schedules or
// noise streams.
namespace dpqr::testkit {

struct GridSpec {
  // Points per simplex edge: coordinates are multiples of 1/resolution.
  std::size_t resolution = 0;
  std::size_t k = 0;

  static GridSpec Create(std::size_t resolution, std::size_t k);
  // Number of grid points, C(resolution + k - 1, k - 1).
  std::size_t Size() const;
  // Max l1 distance from any simplex point to its nearest grid point.
  double L1Bound() const { return static_cast<double>(k) / resolution; }
};

// Multiplicative-weights minimizer of a <g, D> + b H(D) + c KL(D, anchor),
// iterated in log space with step 1/(b + c + |a| range(g)) until the
// objective changes by < 1e-12 and the log-iterate by < 1e-13. Throws
// kNonConvergence after max_iters.
SimplexVector BruteForceProx(const ProxProblem& p,
                             std::size_t max_iters = 10'000'000);

struct GridPoint {
  std::vector<double> point;
  double value = 0.0;
};

// Minimum of f over the grid. Ties keep the first point in lexicographic
// order, so the result does not depend on the worker count.
GridPoint GridMinimize(const GridSpec& grid,
                       const std::function<double(std::span<const double>)>& f);

// max over rows of <q, ref - d> + alpha H(d), minimized over the grid.
GridPoint GridMinPhiAlpha(const SimplexVector& ref, const QueryWorkload& w,
                          double alpha, const GridSpec& grid);

struct DualGridPoint {
  std::vector<double> weights;
  std::vector<double> q;
  double value = 0.0;
};

// <q, ref> - alpha log sum exp(q / alpha) over q = sum_i weights_i row_i, with
// the weights on a grid of the m-simplex. Requires m <= 4.
DualGridPoint GridMaxPsiAlpha(const SimplexVector& ref, const QueryWorkload& w,
                              double alpha, std::size_t resolution);

// Grid error bounds for the two solvers.
double PrimalGridBound(std::size_t k, std::size_t resolution, double alpha);
double DualGridBound(std::size_t m, std::size_t resolution);

struct VectorEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
};

// E[(phi(d + xi) - phi(d)) xi] / sigma^2 with xi ~ N(0, sigma^2 I): the
// Gaussian-integration-by-parts form of the smoothed gradient.
VectorEstimate SteinGradient(std::span<const double> d,
                             const SimplexVector& ref, const QueryWorkload& w,
                             double sigma, std::size_t samples,
                             std::uint64_t seed);

// Direct evaluation helpers, independent of the library's kernels.
double MaxResidual(std::span<const double> d, std::span<const double> ref,
                   const QueryWorkload& w);
double Entropy(std::span<const double> d);

}  // namespace dpqr::testkit

#endif  // DPQR_TESTKIT_TESTKIT_H_
