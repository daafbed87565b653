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

#ifndef DPQR_MECHANISMS_H_
#define DPQR_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpqr/core.h"

namespace dpqr {

// Seeded, counter-based noise source. Two streams with the same (seed, label)
// produce identical sequences. Single owner: move it, do not share it.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::string label);

  // Independent child stream keyed by (this key, sublabel, index). Children do
  // not advance the parent.
  NoiseStream Derive(std::string_view sublabel, std::uint64_t index = 0) const;

  std::uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double NextUniform();
  double NextNormal();

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t counter() const { return counter_; }

 private:
  NoiseStream(std::uint64_t seed, std::string label, std::uint64_t key);

  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

std::uint64_t HashLabel(std::string_view label);
std::uint64_t MixHash(std::uint64_t a, std::uint64_t b);

// Centered Laplace draw with density exp(-|x|/scale)/(2 scale), by inverse
// CDF. scale = 0 returns exactly 0 without consuming the stream.
double SampleLaplace(double scale, NoiseStream& rng);

std::vector<double> SampleGaussianVec(std::size_t k, double sigma,
                                      NoiseStream& rng);

// argmax_i scores[i] + Lap(scale), drawing one Laplace variate per index in
// order. Ties go to the lowest index.
std::size_t ReportNoisyMax(std::span<const double> scores, double scale,
                           NoiseStream& rng);

// Which diameter enters the iteration count T: D1^{3/2} (default) or
// Dinf^{3/2}, the choice that balances the convergence bound.
enum class TDiameter { kD1, kDinf };

inline constexpr std::int64_t kDefaultMaxIterations = 1'000'000;

struct FWScheduleOptions {
  TDiameter t_diameter = TDiameter::kD1;
  std::int64_t max_iterations = kDefaultMaxIterations;
};

struct FWSchedule {
  std::int64_t iterations;
  double gamma;
  double lambda;
  // True when the formula for T exceeded max_iterations.
  bool capped = false;
};

FWSchedule MakeFWSchedule(const PrivacyBudget& budget, RegParam alpha,
                          double d1, double dinf, std::size_t num_queries,
                          std::size_t n, const FWScheduleOptions& options = {});

struct AMSchedule {
  std::int64_t iterations;
  double sigma;
  double alpha;
  // eta_t = t + eta_offset with eta_offset = sqrt(4 / (alpha sigma)) + 1.
  double eta_offset;
  bool capped = false;

  double Eta(std::int64_t t) const { return static_cast<double>(t) + eta_offset; }
};

AMSchedule MakeAMSchedule(const PrivacyBudget& budget, RegParam alpha,
                          double width, std::size_t k, std::size_t n,
                          std::int64_t max_iterations = kDefaultMaxIterations);

// Builds an AM schedule from explicit (T, sigma, alpha).
AMSchedule AMScheduleFromParams(std::int64_t iterations, double sigma,
                                double alpha);

struct CompositionResult {
  double epsilon;
  // log(1/delta) >= eps_step^2 T. When false the bound is reported anyway.
  bool hypothesis_holds;
};

// T-fold composition of eps_step-DP steps: 4 eps_step sqrt(2 T log(1/delta)).
CompositionResult AdvancedComposition(double eps_step, std::int64_t steps,
                                      double delta);

// (beta, eps_rdp)-RDP implies (eps_rdp + log(1/delta)/(beta-1), delta)-DP.
double RdpToDp(double beta, double eps_rdp, double delta);

// Per-step epsilon of the DPFW noisy max: sensitivity D1/n over scale lambda.
double FWStepEpsilon(double d1, std::size_t n, double lambda);

// RDP of one Gaussian smoothing step with l2-sensitivity sqrt(2)/n.
double GaussianStepRdp(double beta, double sigma, std::size_t n);

// beta* = 1 + sqrt(log(1/delta)/T) n sigma, minimizing the converted epsilon.
double OptimalRdpOrder(std::int64_t steps, std::size_t n, double sigma,
                       double delta);

// Total (eps, delta)-DP epsilon of T Gaussian smoothing steps at beta*.
double AMPrivacySpent(std::int64_t steps, std::size_t n, double sigma,
                      double delta);

// Smallest sigma for which AMPrivacySpent equals epsilon (the positive root
// of eps s^2 - 2 s sqrt(T log(1/delta))/n - T/n^2).
double TightAMSigma(std::int64_t steps, std::size_t n, double epsilon,
                    double delta);

}  // namespace dpqr

#endif  // DPQR_MECHANISMS_H_
