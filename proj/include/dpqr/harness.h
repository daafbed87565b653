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

#ifndef DPQR_HARNESS_H_
#define DPQR_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/mechanisms.h"

namespace dpqr {

enum class DistributionKind { kUniform, kDirichlet, kSparse };

struct DistributionSpec {
  DistributionKind kind = DistributionKind::kUniform;
  double concentration = 1.0;  // dirichlet
  std::size_t support = 1;     // sparse

  // "uniform", "dirichlet(c)" or "sparse(s)".
  static DistributionSpec Parse(std::string_view text);
  std::string ToString() const;
};

enum class WorkloadKind { kRandomSign, kRandomBox, kParities };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kRandomSign;
  std::size_t bits = 0;  // parities

  // "random_sign", "random_box" or "parities(d)".
  static WorkloadSpec Parse(std::string_view text);
  std::string ToString() const;
};

SimplexVector GenDistribution(std::size_t k, const DistributionSpec& spec,
                              NoiseStream& rng);

// All 2^d characters chi_S(z) = (-1)^{|S & z|} over the universe {0,1}^d,
// one row per subset S, before symmetrization.
QueryWorkload ParityRows(std::size_t d);

// Symmetrized workload. For parities m is ignored and k must equal 2^d.
QueryWorkload GenWorkload(std::size_t k, std::size_t m, const WorkloadSpec& spec,
                          NoiseStream& rng);

// n independent inverse-CDF draws from p.
Dataset SampleDataset(const SimplexVector& p, std::size_t n, NoiseStream& rng);

// count inverse-CDF draws from a released distribution.
Dataset SampleSynthetic(const SimplexVector& priv, std::size_t count,
                        NoiseStream& rng);

struct ExperimentPlan {
  std::vector<std::string> algorithms{"dpfw", "dpam"};
  std::vector<std::size_t> n_grid;
  std::vector<double> eps_grid;
  double delta = 1e-6;
  std::size_t repetitions = 20;
  std::size_t k = 16;
  DistributionSpec distribution{DistributionKind::kDirichlet, 1.0, 1};
  WorkloadSpec workload{};
  std::size_t m = 16;
  std::uint64_t master_seed = 0;
  // Overrides the tuned alpha of every run.
  std::optional<double> alpha;
  std::int64_t max_iterations = kDefaultMaxIterations;

  void Validate() const;
};

// k=16, Dirichlet(1) P, random_sign with m=16 (32 after symmetrization),
// n = 2^8..2^14, eps in {0.5, 1, 2}, delta = 1e-6, R = 20.
ExperimentPlan DefaultPlan();

struct RepetitionRecord {
  std::uint64_t seed = 0;
  double population_error = 0.0;
  double empirical_error = 0.0;
  // max_q <q, P - P_n> and max_q <q, P_n - P>.
  double sampling_forward = 0.0;
  double sampling_backward = 0.0;
  double alpha = 0.0;
  std::int64_t iterations = 0;
  double runtime_ms = 0.0;
  std::optional<bool> regime_ok;
  std::vector<double> priv;
};

struct CellRecord {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::string algorithm;
  double population_mean = 0.0;
  double population_std = 0.0;
  double empirical_mean = 0.0;
  double empirical_std = 0.0;
  double runtime_mean_ms = 0.0;
  // Set for dpam: true iff every repetition satisfied the regime condition.
  std::optional<bool> regime_ok;
  std::size_t failures = 0;
  std::vector<std::string> errors;
  std::vector<RepetitionRecord> repetitions;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
};

struct SlopeRecord {
  std::string algorithm;
  double epsilon = 0.0;
  SlopeFit fit;
};

struct ExperimentResult {
  ExperimentPlan plan;
  SimplexVector population = Uniform(1);
  double width = 0.0;
  std::vector<CellRecord> cells;
  std::vector<SlopeRecord> slopes;

  const CellRecord* Find(std::string_view algorithm, std::size_t n,
                         double epsilon) const;
  const SlopeRecord* FindSlope(std::string_view algorithm,
                               double epsilon) const;
};

// Ordinary least squares of log y on log x. std_error is 0 for two points.
SlopeFit FitLogLogSlope(std::span<const double> x, std::span<const double> y);

// Seed of repetition `rep` in cell (algorithm, n index, eps index).
std::uint64_t RepetitionSeed(std::uint64_t master, std::size_t algorithm,
                             std::size_t n_index, std::size_t eps_index,
                             std::size_t rep);

// Runs every (algorithm, n, eps, rep) job. Jobs may run in parallel; the
// result does not depend on the worker count. Per-run errors are recorded in
// the cell, not thrown.
ExperimentResult RunExperiment(const ExperimentPlan& plan);

}  // namespace dpqr

#endif  // DPQR_HARNESS_H_
