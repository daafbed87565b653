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

#include "dpqr/harness.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dpqr/dpam.h"
#include "dpqr/dpfw.h"
#include "dpqr/kernels.h"
#include "dpqr/objective.h"

namespace dpqr {
namespace {

[[noreturn]] void BadSpec(std::string_view text) {
  throw Error(ErrorCode::kInvalidSpec, "unrecognized spec '" +
                                           std::string(text) + "'");
}

// Parses "name(arg)" and returns arg, or nullopt if the name does not match.
std::optional<std::string> Argument(std::string_view text,
                                    std::string_view name) {
  if (text.size() <= name.size() + 2 || text.substr(0, name.size()) != name ||
      text[name.size()] != '(' || text.back() != ')') {
    return std::nullopt;
  }
  return std::string(text.substr(name.size() + 1,
                                 text.size() - name.size() - 2));
}

double ParsePositiveReal(const std::string& arg, std::string_view text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (const std::exception&) {
    BadSpec(text);
  }
  if (used != arg.size() || !(v > 0.0) || !std::isfinite(v)) BadSpec(text);
  return v;
}

std::size_t ParsePositiveInt(const std::string& arg, std::string_view text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  if (arg.empty() || arg[0] == '-' || arg[0] == '+') BadSpec(text);
  try {
    v = std::stoull(arg, &used);
  } catch (const std::exception&) {
    BadSpec(text);
  }
  if (used != arg.size() || v == 0) BadSpec(text);
  return static_cast<std::size_t>(v);
}

std::string FormatReal(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::size_t UniformIndex(std::size_t bound, NoiseStream& rng) {
  return static_cast<std::size_t>(rng.NextU64() % bound);
}

// Marsaglia-Tsang; shapes below one use the U^{1/a} boost.
double SampleGamma(double shape, NoiseStream& rng) {
  if (shape < 1.0) {
    const double u = rng.NextUniform();
    return SampleGamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.NextNormal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.NextUniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> SampleDirichlet(std::size_t k, double concentration,
                                    NoiseStream& rng) {
  std::vector<double> g(k);
  double total = 0.0;
  for (double& x : g) {
    x = SampleGamma(concentration, rng);
    total += x;
  }
  if (!(total > 0.0)) {
    // Every draw underflowed (tiny concentration): fall back to a point mass.
    std::fill(g.begin(), g.end(), 0.0);
    g[UniformIndex(k, rng)] = 1.0;
    return g;
  }
  for (double& x : g) x /= total;
  return g;
}

Dataset InverseCdfSample(const SimplexVector& p, std::size_t n,
                         NoiseStream& rng) {
  const std::size_t k = p.size();
  std::vector<double> cdf(k);
  std::partial_sum(p.values().begin(), p.values().end(), cdf.begin());
  std::size_t last_positive = 0;
  for (std::size_t z = 0; z < k; ++z) {
    if (p[z] > 0.0) last_positive = z;
  }
  const double total = cdf.back();
  std::vector<std::uint32_t> points(n);
  for (std::uint32_t& x : points) {
    const double u = rng.NextUniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t z = static_cast<std::size_t>(it - cdf.begin());
    x = static_cast<std::uint32_t>(std::min(z, last_positive));
  }
  return Dataset::Create(std::move(points), k);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd Summarize(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

DistributionSpec DistributionSpec::Parse(std::string_view text) {
  if (text == "uniform") return {DistributionKind::kUniform, 1.0, 1};
  if (auto arg = Argument(text, "dirichlet")) {
    return {DistributionKind::kDirichlet, ParsePositiveReal(*arg, text), 1};
  }
  if (auto arg = Argument(text, "sparse")) {
    return {DistributionKind::kSparse, 1.0, ParsePositiveInt(*arg, text)};
  }
  BadSpec(text);
}

std::string DistributionSpec::ToString() const {
  switch (kind) {
    case DistributionKind::kUniform:
      return "uniform";
    case DistributionKind::kDirichlet:
      return "dirichlet(" + FormatReal(concentration) + ")";
    case DistributionKind::kSparse:
      return "sparse(" + std::to_string(support) + ")";
  }
  return "uniform";
}

WorkloadSpec WorkloadSpec::Parse(std::string_view text) {
  if (text == "random_sign") return {WorkloadKind::kRandomSign, 0};
  if (text == "random_box") return {WorkloadKind::kRandomBox, 0};
  if (auto arg = Argument(text, "parities")) {
    return {WorkloadKind::kParities, ParsePositiveInt(*arg, text)};
  }
  BadSpec(text);
}

std::string WorkloadSpec::ToString() const {
  switch (kind) {
    case WorkloadKind::kRandomSign:
      return "random_sign";
    case WorkloadKind::kRandomBox:
      return "random_box";
    case WorkloadKind::kParities:
      return "parities(" + std::to_string(bits) + ")";
  }
  return "random_sign";
}

SimplexVector GenDistribution(std::size_t k, const DistributionSpec& spec,
                              NoiseStream& rng) {
  if (k < 2) throw Error(ErrorCode::kInvalidSpec, "distribution needs k >= 2");
  switch (spec.kind) {
    case DistributionKind::kUniform:
      return Uniform(k);
    case DistributionKind::kDirichlet:
      if (!(spec.concentration > 0.0)) {
        throw Error(ErrorCode::kInvalidSpec, "dirichlet concentration must be > 0");
      }
      return SimplexVector::Create(SampleDirichlet(k, spec.concentration, rng));
    case DistributionKind::kSparse: {
      if (spec.support == 0 || spec.support > k) {
        throw Error(ErrorCode::kInvalidSpec, "sparse support must lie in [1, k]");
      }
      std::vector<std::size_t> idx(k);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < spec.support; ++i) {
        std::swap(idx[i], idx[i + UniformIndex(k - i, rng)]);
      }
      const std::vector<double> weights =
          SampleDirichlet(spec.support, 1.0, rng);
      std::vector<double> values(k, 0.0);
      for (std::size_t i = 0; i < spec.support; ++i) values[idx[i]] = weights[i];
      return SimplexVector::Create(std::move(values));
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown distribution kind");
}

QueryWorkload ParityRows(std::size_t d) {
  if (d == 0 || d > 20) {
    throw Error(ErrorCode::kInvalidSpec, "parities need 1 <= d <= 20");
  }
  const std::size_t k = std::size_t{1} << d;
  std::vector<double> flat(k * k);
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t z = 0; z < k; ++z) {
      flat[s * k + z] = (std::popcount(s & z) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return QueryWorkload::FromFlat(k, std::move(flat));
}

QueryWorkload GenWorkload(std::size_t k, std::size_t m, const WorkloadSpec& spec,
                          NoiseStream& rng) {
  if (k < 1) throw Error(ErrorCode::kInvalidSpec, "workload needs k >= 1");
  if (spec.kind == WorkloadKind::kParities) {
    if (spec.bits >= 64 || (std::size_t{1} << spec.bits) != k) {
      throw Error(ErrorCode::kInvalidSpec, "parities(d) requires k = 2^d");
    }
    return Symmetrize(ParityRows(spec.bits));
  }
  if (m < 1) throw Error(ErrorCode::kInvalidSpec, "workload needs m >= 1");
  std::vector<double> flat(m * k);
  for (double& x : flat) {
    if (spec.kind == WorkloadKind::kRandomSign) {
      x = (rng.NextU64() >> 63) ? 1.0 : -1.0;
    } else {
      x = 2.0 * rng.NextUniform() - 1.0;
    }
  }
  return Symmetrize(QueryWorkload::FromFlat(k, std::move(flat)));
}

Dataset SampleDataset(const SimplexVector& p, std::size_t n, NoiseStream& rng) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  return InverseCdfSample(p, n, rng);
}

Dataset SampleSynthetic(const SimplexVector& priv, std::size_t count,
                        NoiseStream& rng) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
  return InverseCdfSample(priv, count, rng);
}

void ExperimentPlan::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidSpec, "plan: " + msg);
  };
  if (algorithms.empty()) fail("no algorithms");
  for (const std::string& a : algorithms) {
    if (a != "dpfw" && a != "dpam") fail("unknown algorithm '" + a + "'");
  }
  if (n_grid.empty()) fail("empty n grid");
  for (std::size_t n : n_grid) {
    if (n < 1) fail("n values must be >= 1");
  }
  if (eps_grid.empty()) fail("empty eps grid");
  for (double e : eps_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) fail("eps values must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (repetitions < 1) fail("repetitions must be >= 1");
  if (k < 2) fail("k must be >= 2");
  if (alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) {
    fail("alpha must be positive and finite");
  }
  if (max_iterations < 1) fail("max_iterations must be >= 1");
}

ExperimentPlan DefaultPlan() {
  ExperimentPlan plan;
  for (int e = 8; e <= 14; ++e) plan.n_grid.push_back(std::size_t{1} << e);
  plan.eps_grid = {0.5, 1.0, 2.0};
  return plan;
}

const CellRecord* ExperimentResult::Find(std::string_view algorithm,
                                         std::size_t n, double epsilon) const {
  for (const CellRecord& c : cells) {
    if (c.algorithm == algorithm && c.n == n && c.epsilon == epsilon) return &c;
  }
  return nullptr;
}

const SlopeRecord* ExperimentResult::FindSlope(std::string_view algorithm,
                                               double epsilon) const {
  for (const SlopeRecord& s : slopes) {
    if (s.algorithm == algorithm && s.epsilon == epsilon) return &s;
  }
  return nullptr;
}

SlopeFit FitLogLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "slope fit: size mismatch");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "slope fit needs two points");
  }
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "slope fit needs positive data");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "slope fit needs distinct x");
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

std::uint64_t RepetitionSeed(std::uint64_t master, std::size_t algorithm,
                             std::size_t n_index, std::size_t eps_index,
                             std::size_t rep) {
  std::uint64_t h = MixHash(master, algorithm);
  h = MixHash(h, n_index);
  h = MixHash(h, eps_index);
  return MixHash(h, rep);
}

ExperimentResult RunExperiment(const ExperimentPlan& plan) {
  plan.Validate();
  ExperimentResult result;
  result.plan = plan;

  const NoiseStream plan_rng(plan.master_seed, "plan");
  NoiseStream dist_rng = plan_rng.Derive("distribution");
  NoiseStream work_rng = plan_rng.Derive("workload");
  result.population = GenDistribution(plan.k, plan.distribution, dist_rng);
  const QueryWorkload w = GenWorkload(plan.k, plan.m, plan.workload, work_rng);
  const WidthEstimate width = EstimateWidth(w, kDefaultWidthSamples, plan_rng);
  result.width = width.mean;

  struct Job {
    std::size_t algo, ni, ei, rep, cell;
  };
  std::vector<Job> jobs;
  const std::size_t num_cells =
      plan.algorithms.size() * plan.eps_grid.size() * plan.n_grid.size();
  result.cells.resize(num_cells);
  for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
    for (std::size_t ei = 0; ei < plan.eps_grid.size(); ++ei) {
      for (std::size_t ni = 0; ni < plan.n_grid.size(); ++ni) {
        const std::size_t cell =
            (a * plan.eps_grid.size() + ei) * plan.n_grid.size() + ni;
        CellRecord& c = result.cells[cell];
        c.algorithm = plan.algorithms[a];
        c.n = plan.n_grid[ni];
        c.epsilon = plan.eps_grid[ei];
        for (std::size_t r = 0; r < plan.repetitions; ++r) {
          jobs.push_back({a, ni, ei, r, cell});
        }
      }
    }
  }

  std::vector<RepetitionRecord> records(jobs.size());
  std::vector<std::string> failures(jobs.size());
  kernels::ForEachChunk(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    RepetitionRecord& rec = records[j];
    try {
      const auto start = std::chrono::steady_clock::now();
      rec.seed = RepetitionSeed(plan.master_seed, job.algo, job.ni, job.ei,
                                job.rep);
      const NoiseStream rng(rec.seed, "repetition");
      NoiseStream data_rng = rng.Derive("data");
      const Dataset data =
          SampleDataset(result.population, plan.n_grid[job.ni], data_rng);
      const SimplexVector emp = Empirical(data, plan.k);
      rec.sampling_forward = MaxQueryError(result.population, emp, w);
      rec.sampling_backward = MaxQueryError(emp, result.population, w);
      const PrivacyBudget budget =
          PrivacyBudget::Create(plan.eps_grid[job.ei], plan.delta);
      RunReport report;
      if (plan.algorithms[job.algo] == "dpfw") {
        FWRunOptions options;
        options.population = result.population;
        options.schedule_options.max_iterations = plan.max_iterations;
        report = ReleaseFW(data, w, budget, plan.alpha, rng.Derive("run"),
                           options);
        rec.iterations = report.fw_schedule->iterations;
      } else {
        AMRunOptions options;
        options.population = result.population;
        options.max_iterations = plan.max_iterations;
        options.width = width;
        report = ReleaseAM(data, w, budget, plan.alpha, rng.Derive("run"),
                           options);
        rec.iterations = report.am_schedule->iterations;
        rec.regime_ok = report.regime_ok;
      }
      rec.alpha = report.alpha;
      rec.population_error = *report.population_error;
      rec.empirical_error = report.empirical_error;
      rec.priv = report.priv.vector();
      rec.runtime_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    CellRecord& c = result.cells[jobs[j].cell];
    if (!failures[j].empty()) {
      ++c.failures;
      c.errors.push_back("repetition " + std::to_string(jobs[j].rep) + ": " +
                         failures[j]);
      continue;
    }
    c.repetitions.push_back(std::move(records[j]));
  }
  for (CellRecord& c : result.cells) {
    std::vector<double> pop, emp, ms;
    for (const RepetitionRecord& r : c.repetitions) {
      pop.push_back(r.population_error);
      emp.push_back(r.empirical_error);
      ms.push_back(r.runtime_ms);
      if (r.regime_ok) c.regime_ok = c.regime_ok.value_or(true) && *r.regime_ok;
    }
    const MeanStd p = Summarize(pop);
    const MeanStd e = Summarize(emp);
    c.population_mean = p.mean;
    c.population_std = p.std;
    c.empirical_mean = e.mean;
    c.empirical_std = e.std;
    c.runtime_mean_ms = Summarize(ms).mean;
  }

  for (const std::string& algo : plan.algorithms) {
    for (double eps : plan.eps_grid) {
      std::vector<double> xs, ys;
      for (std::size_t n : plan.n_grid) {
        const CellRecord* c = result.Find(algo, n, eps);
        if (c && !c->repetitions.empty() && c->population_mean > 0.0) {
          xs.push_back(static_cast<double>(n));
          ys.push_back(c->population_mean);
        }
      }
      if (xs.size() < 2) continue;
      try {
        result.slopes.push_back({algo, eps, FitLogLogSlope(xs, ys)});
      } catch (const Error&) {
        // Too few distinct n values; no fit for this slice.
      }
    }
  }
  return result;
}

}  // namespace dpqr
