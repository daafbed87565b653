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

#ifndef DPQR_REPORT_H_
#define DPQR_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpqr/core.h"
#include "dpqr/mechanisms.h"
#include "dpqr/objective.h"

namespace dpqr {

inline constexpr const char* kNonPrivateWarning =
    "NON-PRIVATE DEBUG RUN: noise disabled, output carries no privacy "
    "guarantee";

// Everything needed to audit or replay one release.
struct RunReport {
  std::string algorithm;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  bool alpha_auto = false;
  std::uint64_t seed = 0;
  bool non_private = false;

  std::optional<FWSchedule> fw_schedule;
  TDiameter t_diameter = TDiameter::kD1;
  std::optional<std::int64_t> output_iterate;

  std::optional<AMSchedule> am_schedule;
  std::string entropy_weight;
  std::optional<WidthEstimate> width;
  std::optional<bool> regime_ok;

  // Total epsilon implied by the accounting chain for the schedule used.
  std::optional<double> privacy_spent;

  SimplexVector priv = Uniform(1);
  double empirical_error = 0.0;
  std::optional<double> population_error;
  std::vector<double> answers;

  std::map<std::string, double> timings_ms;
  std::vector<std::string> warnings;
};

}  // namespace dpqr

#endif  // DPQR_REPORT_H_
