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

#include "dpqr/cli.h"

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dpqr/dpam.h"
#include "dpqr/dpfw.h"
#include "dpqr/harness.h"
#include "dpqr/io.h"

namespace dpqr {
namespace {

// A failure attributed to one command-line flag.
class FlagError : public std::runtime_error {
 public:
  FlagError(const std::string& flag, const std::string& what)
      : std::runtime_error(flag + ": " + what),
        degenerate_(false) {}
  FlagError(const std::string& flag, const Error& e)
      : std::runtime_error(flag + ": " + e.what()),
        degenerate_(e.code() == ErrorCode::kDegenerateSchedule) {}
  bool degenerate() const { return degenerate_; }

 private:
  bool degenerate_;
};

template <class F>
auto ForFlag(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw FlagError(flag, e);
  }
}

struct GenWorkloadArgs {
  std::size_t k = 0;
  std::size_t m = 0;
  std::string kind;
  std::uint64_t seed = 0;
  std::string out;
};

struct GenDataArgs {
  std::string dist;
  std::string kind;
  std::size_t k = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunArgs {
  std::string algo;
  std::string data;
  std::string workload;
  double eps = 0.0;
  double delta = 0.0;
  std::string alpha = "auto";
  std::uint64_t seed = 0;
  std::string out;
  std::string true_dist;
  bool no_noise = false;
  bool record_timings = false;
  std::string t_diameter = "d1";
  std::string entropy_weight = "alpha_scaled";
  std::int64_t max_iterations = kDefaultMaxIterations;
};

struct BenchArgs {
  std::string plan;
  std::string out;
  bool record_timings = false;
};

struct SampleArgs {
  std::string report;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void DoGenWorkload(const GenWorkloadArgs& a) {
  const WorkloadSpec spec =
      ForFlag("--kind", [&] { return WorkloadSpec::Parse(a.kind); });
  NoiseStream rng(a.seed, "gen-workload");
  const QueryWorkload w =
      ForFlag("--kind", [&] { return GenWorkload(a.k, a.m, spec, rng); });
  WriteWorkload(w, a.out);
}

void DoGenData(const GenDataArgs& a) {
  const NoiseStream rng(a.seed, "gen-data");
  std::optional<SimplexVector> p;
  if (!a.dist.empty()) {
    p = ForFlag("--dist", [&] { return LoadDistribution(a.dist); });
    if (a.k != 0 && a.k != p->size()) {
      throw FlagError("--k", "does not match the size of --dist");
    }
  } else {
    if (a.k == 0) throw FlagError("--k", "required with --kind");
    const DistributionSpec spec =
        ForFlag("--kind", [&] { return DistributionSpec::Parse(a.kind); });
    NoiseStream dist_rng = rng.Derive("distribution");
    p = ForFlag("--kind", [&] { return GenDistribution(a.k, spec, dist_rng); });
  }
  NoiseStream data_rng = rng.Derive("data");
  const Dataset data =
      ForFlag("--n", [&] { return SampleDataset(*p, a.n, data_rng); });
  WriteDataset(data, a.out);
}

void DoRun(const RunArgs& a, std::ostream& err) {
  const Dataset data = ForFlag("--data", [&] { return LoadDataset(a.data); });
  const QueryWorkload w =
      ForFlag("--workload", [&] { return LoadWorkload(a.workload); });
  if (data.k() != w.k()) {
    throw FlagError("--workload", "universe size k=" + std::to_string(w.k()) +
                                      " differs from the dataset's k=" +
                                      std::to_string(data.k()));
  }
  const PrivacyBudget budget = ForFlag("--eps", [&] {
    return PrivacyBudget::Create(a.eps, a.delta);
  });
  std::optional<double> alpha;
  if (a.alpha != "auto") {
    std::size_t used = 0;
    try {
      alpha = std::stod(a.alpha, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != a.alpha.size() || !alpha || !(*alpha > 0.0)) {
      throw FlagError("--alpha", "expected a positive number or 'auto'");
    }
  }
  std::optional<SimplexVector> population;
  if (!a.true_dist.empty()) {
    population =
        ForFlag("--true-dist", [&] { return LoadDistribution(a.true_dist); });
    if (population->size() != w.k()) {
      throw FlagError("--true-dist", "size differs from the workload's k");
    }
  }
  const NoiseStream rng(a.seed, "run");
  RunReport report;
  if (a.algo == "dpfw") {
    FWRunOptions options;
    options.no_noise = a.no_noise;
    options.population = population;
    options.schedule_options.t_diameter =
        a.t_diameter == "dinf" ? TDiameter::kDinf : TDiameter::kD1;
    options.schedule_options.max_iterations = a.max_iterations;
    report = ForFlag("--algo", [&] {
      return ReleaseFW(data, w, budget, alpha, rng, options);
    });
  } else {
    AMRunOptions options;
    options.no_noise = a.no_noise;
    options.population = population;
    options.max_iterations = a.max_iterations;
    options.entropy_weight = a.entropy_weight == "listing"
                                 ? AMEntropyWeight::kListing
                                 : AMEntropyWeight::kAlphaScaled;
    report = ForFlag("--algo", [&] {
      return ReleaseAM(data, w, budget, alpha, rng, options);
    });
  }
  WriteReport(report, a.out, a.record_timings);
  for (const std::string& warning : report.warnings) {
    err << "warning: " << warning << "\n";
  }
}

void DoBench(const BenchArgs& a) {
  const ExperimentPlan plan =
      a.plan.empty() ? DefaultPlan()
                     : ForFlag("--plan", [&] { return LoadPlan(a.plan); });
  const ExperimentResult result = RunExperiment(plan);
  WriteResult(result, a.out, a.record_timings);
}

void DoSample(const SampleArgs& a) {
  const RunReport report =
      ForFlag("--report", [&] { return LoadReport(a.report); });
  NoiseStream rng(a.seed, "sample");
  const Dataset data = ForFlag("--count", [&] {
    return SampleSynthetic(report.priv, a.count, rng);
  });
  WriteDataset(data, a.out);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private linear-query release", "dpqr"};
  app.require_subcommand(1);

  GenWorkloadArgs gw;
  auto* gen_workload = app.add_subcommand("gen-workload", "Generate a workload");
  gen_workload->add_option("--k", gw.k, "Universe size")->required();
  gen_workload->add_option("--m", gw.m, "Rows before symmetrization")->required();
  gen_workload->add_option("--kind", gw.kind,
                           "random_sign | random_box | parities(d)")
      ->required();
  gen_workload->add_option("--seed", gw.seed)->required();
  gen_workload->add_option("--out", gw.out)->required();

  GenDataArgs gd;
  auto* gen_data = app.add_subcommand("gen-data", "Sample a dataset");
  auto* dist_opt = gen_data->add_option("--dist", gd.dist, "Distribution file");
  auto* kind_opt = gen_data->add_option(
      "--kind", gd.kind, "uniform | dirichlet(c) | sparse(s)");
  dist_opt->excludes(kind_opt);
  gen_data->add_option("--k", gd.k, "Universe size");
  gen_data->add_option("--n", gd.n, "Sample size")->required();
  gen_data->add_option("--seed", gd.seed)->required();
  gen_data->add_option("--out", gd.out)->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Release a private distribution");
  run->add_option("--algo", ra.algo)
      ->required()
      ->check(CLI::IsMember({"dpfw", "dpam"}));
  run->add_option("--data", ra.data)->required();
  run->add_option("--workload", ra.workload)->required();
  run->add_option("--eps", ra.eps)->required();
  run->add_option("--delta", ra.delta)->required();
  run->add_option("--alpha", ra.alpha, "Positive number or 'auto'");
  run->add_option("--seed", ra.seed)->required();
  run->add_option("--out", ra.out)->required();
  run->add_option("--true-dist", ra.true_dist, "True distribution file");
  run->add_flag("--no-noise", ra.no_noise, "Disable noise (not private)");
  run->add_flag("--record-timings", ra.record_timings);
  run->add_option("--t-diameter", ra.t_diameter)
      ->check(CLI::IsMember({"d1", "dinf"}));
  run->add_option("--entropy-weight", ra.entropy_weight)
      ->check(CLI::IsMember({"alpha_scaled", "listing"}));
  run->add_option("--max-iterations", ra.max_iterations)
      ->check(CLI::PositiveNumber);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run an experiment plan");
  bench->add_option("--plan", ba.plan, "Plan file (default plan if omitted)");
  bench->add_option("--out", ba.out)->required();
  bench->add_flag("--record-timings", ba.record_timings);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample from a released report");
  sample->add_option("--report", sa.report)->required();
  sample->add_option("--count", sa.count)->required();
  sample->add_option("--seed", sa.seed)->required();
  sample->add_option("--out", sa.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*gen_workload) {
      DoGenWorkload(gw);
    } else if (*gen_data) {
      if (gd.dist.empty() && gd.kind.empty()) {
        throw FlagError("--dist", "one of --dist or --kind is required");
      }
      DoGenData(gd);
    } else if (*run) {
      DoRun(ra, err);
    } else if (*bench) {
      DoBench(ba);
    } else if (*sample) {
      DoSample(sa);
    }
  } catch (const FlagError& e) {
    err << "error: " << e.what() << "\n";
    return e.degenerate() ? kExitDegenerate : kExitValidation;
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kDegenerateSchedule ? kExitDegenerate
                                                      : kExitValidation;
  }
  return kExitOk;
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace dpqr
