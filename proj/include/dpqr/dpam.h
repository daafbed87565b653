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

#ifndef DPQR_DPAM_H_
#define DPQR_DPAM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/mechanisms.h"
#include "dpqr/objective.h"
#include "dpqr/report.h"

namespace dpqr {

inline constexpr std::size_t kDefaultWidthSamples = 1000;

// How the entropy term of the mirror step is weighted.
//   kAlphaScaled: eta_t [<g, D> + alpha H(D)] + alpha sum_{tau<t} eta_tau KL,
//                 i.e. regularized dual averaging on phi_sigma + alpha H:
//                 log D_{t+1} = -sum eta g / (alpha sum eta) + const.
//                 alpha = 1 coincides with kListing.
//   kListing:     eta_t [<g, D> + H(D)] + sum_{tau<t} eta_tau KL, unscaled.
enum class AMEntropyWeight { kAlphaScaled, kListing };

struct AMIterationRecord {
  std::int64_t t;
  double eta;
  double cum_eta;
  std::size_t row;
};

struct AMTrace {
  std::vector<AMIterationRecord> records;
  SimplexVector final_ag = Uniform(1);
  AMSchedule schedule{};
  std::uint64_t seed = 0;
};

struct AMRunOptions {
  std::optional<AMSchedule> schedule;
  std::int64_t max_iterations = kDefaultMaxIterations;
  // Forces xi = 0 in the oracle. The run is then not private.
  bool no_noise = false;
  AMEntropyWeight entropy_weight = AMEntropyWeight::kAlphaScaled;
  std::size_t width_samples = kDefaultWidthSamples;
  // Skips the Monte Carlo width estimate when supplied.
  std::optional<WidthEstimate> width;
  std::optional<SimplexVector> population;
  // Called after iteration t with (t, D_t^md, D_{t+1}, D_{t+1}^ag).
  std::function<void(std::int64_t, const SimplexVector&, const SimplexVector&,
                     const SimplexVector&)>
      on_iterate;
};

struct AMResult {
  SimplexVector priv = Uniform(1);
  AMTrace trace;
  std::optional<WidthEstimate> width;
  std::vector<std::string> warnings;
};

// Monte Carlo width with the substream rng.Derive("width").
WidthEstimate EstimateWidth(const QueryWorkload& w, std::size_t samples,
                            const NoiseStream& rng);

// Accelerated composite mirror descent on phi_sigma + alpha H. Oracle noise
// for iteration t comes from rng.Derive("smoothing", t).
AMResult RunDPAM(const Dataset& data, const QueryWorkload& w,
                 const PrivacyBudget& budget, double alpha,
                 const NoiseStream& rng, const AMRunOptions& options = {});

double AlphaStarAM(const PrivacyBudget& budget, double width, std::size_t k,
                   std::size_t n);

// w^3 log(1/delta) / (eps log^{3/2} k): the sample size above which the
// tuned rate applies.
double RegimeThreshold(double width, const PrivacyBudget& budget,
                       std::size_t k);
bool RegimeCheck(double width, const PrivacyBudget& budget, std::size_t k,
                 std::size_t n);

RunReport ReleaseAM(const Dataset& data, const QueryWorkload& w,
                    const PrivacyBudget& budget, std::optional<double> alpha,
                    const NoiseStream& rng, const AMRunOptions& options = {});

}  // namespace dpqr

#endif  // DPQR_DPAM_H_
