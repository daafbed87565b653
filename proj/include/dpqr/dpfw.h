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

#ifndef DPQR_DPFW_H_
#define DPQR_DPFW_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/mechanisms.h"
#include "dpqr/report.h"

namespace dpqr {

struct FWIterationRecord {
  std::int64_t t;
  std::size_t row;
  double step;
  // Frank-Wolfe gap at q_t against P_n, and against the true distribution
  // when one is supplied. Only filled when FWRunOptions::record_gap is set.
  std::optional<double> gap;
  std::optional<double> population_gap;
};

struct FWTrace {
  std::vector<FWIterationRecord> records;
  std::int64_t output_index = 0;
  FWSchedule schedule{};
  std::uint64_t seed = 0;

  // Mean of the recorded empirical gaps; nullopt if gaps were not recorded.
  std::optional<double> MeanGap() const;
};

struct FWRunOptions {
  // Overrides the schedule derived from the budget.
  std::optional<FWSchedule> schedule;
  FWScheduleOptions schedule_options;
  // Forces lambda = 0. The run is then not private.
  bool no_noise = false;
  bool record_gap = false;
  std::optional<SimplexVector> population;
  // Called with (t, q_t) before iteration t and with (T, q_T) at the end.
  std::function<void(std::int64_t, const DualPoint&)> on_iterate;
};

struct FWResult {
  DualPoint q_out;
  FWTrace trace;
  std::vector<std::string> warnings;
};

// Differentially private Frank-Wolfe on the entropy-regularized dual.
// Noise for iteration t comes from rng.Derive("rnm", t); the output index is
// drawn from rng.Derive("output").
FWResult RunDPFW(const Dataset& data, const QueryWorkload& w,
                 const PrivacyBudget& budget, RegParam alpha,
                 const NoiseStream& rng, const FWRunOptions& options = {});

// The primal point matched to a dual point: softmax(q / alpha).
SimplexVector KKTMap(const DualPoint& q, double alpha);

double AlphaStarFW(const PrivacyBudget& budget, std::size_t num_queries,
                   std::size_t k, std::size_t n);

// Full release: DPFW, then the KKT map. alpha defaults to AlphaStarFW.
RunReport ReleaseFW(const Dataset& data, const QueryWorkload& w,
                    const PrivacyBudget& budget, std::optional<double> alpha,
                    const NoiseStream& rng, const FWRunOptions& options = {});

}  // namespace dpqr

#endif  // DPQR_DPFW_H_
