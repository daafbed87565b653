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

#ifndef DPQR_IO_H_
#define DPQR_IO_H_

#include <string>

#include "dpqr/core.h"
#include "dpqr/harness.h"
#include "dpqr/report.h"

namespace dpqr {

inline constexpr const char* kNonPrivateLabel = "non-private debug";

// Workload files: {"k": int, "symmetric": bool, "queries": [[...], ...]}.
QueryWorkload ParseWorkload(const std::string& text);
std::string SerializeWorkload(const QueryWorkload& w);
QueryWorkload LoadWorkload(const std::string& path);
void WriteWorkload(const QueryWorkload& w, const std::string& path);

// Dataset files: a header line "k=<int>" then one index per line.
Dataset ParseDataset(const std::string& text);
std::string SerializeDataset(const Dataset& data);
Dataset LoadDataset(const std::string& path);
void WriteDataset(const Dataset& data, const std::string& path);

// Distribution files: {"k": int, "values": [...]}.
SimplexVector ParseDistribution(const std::string& text);
std::string SerializeDistribution(const SimplexVector& p);
SimplexVector LoadDistribution(const std::string& path);
void WriteDistribution(const SimplexVector& p, const std::string& path);

// Wall-clock fields are written only when include_timings is set, so files
// from repeated runs compare byte for byte.
std::string SerializeReport(const RunReport& report, bool include_timings);
RunReport ParseReport(const std::string& text);
RunReport LoadReport(const std::string& path);
void WriteReport(const RunReport& report, const std::string& path,
                 bool include_timings = false);

// Missing plan fields take the values of DefaultPlan().
ExperimentPlan ParsePlan(const std::string& text);
std::string SerializePlan(const ExperimentPlan& plan);
ExperimentPlan LoadPlan(const std::string& path);

std::string SerializeResult(const ExperimentResult& result,
                            bool include_timings);
void WriteResult(const ExperimentResult& result, const std::string& path,
                 bool include_timings = false);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace dpqr

#endif  // DPQR_IO_H_
