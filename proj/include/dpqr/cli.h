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

#ifndef DPQR_CLI_H_
#define DPQR_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dpqr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegenerate = 3;

// Subcommands: gen-workload, gen-data, run, bench, sample. Returns the exit
// code; messages go to `out` and `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace dpqr

#endif  // DPQR_CLI_H_
