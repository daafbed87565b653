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

#include "dpqr/dpam.h"

#include <chrono>
#include <cmath>

#include "dpqr/entropy.h"

namespace dpqr {
namespace {

SimplexVector Blend(const SimplexVector& a, double wa, const SimplexVector& b,
                    double wb) {
  std::vector<double> out(a.size());
  for (std::size_t z = 0; z < a.size(); ++z) out[z] = wa * a[z] + wb * b[z];
  return SimplexVector::FromTrusted(std::move(out));
}

}  // namespace

WidthEstimate EstimateWidth(const QueryWorkload& w, std::size_t samples,
                            const NoiseStream& rng) {
  return GaussianWidthMC(w, samples, rng.Derive("width"));
}

AMResult RunDPAM(const Dataset& data, const QueryWorkload& w,
                 const PrivacyBudget& budget, double alpha,
                 const NoiseStream& rng, const AMRunOptions& options) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "DPAM requires alpha > 0");
  }
  if (data.k() != w.k()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset universe size differs from workload width");
  }
  AMResult result;
  if (!IsClosedUnderNegation(w)) {
    result.warnings.push_back("workload is not closed under negation");
  }
  AMSchedule schedule;
  if (options.schedule) {
    schedule = *options.schedule;
  } else {
    result.width = options.width ? *options.width
                                 : EstimateWidth(w, options.width_samples, rng);
    schedule = MakeAMSchedule(budget, RegParam::Create(alpha),
                              result.width->mean, w.k(), data.n(),
                              options.max_iterations);
  }
  if (schedule.capped) {
    result.warnings.push_back("iteration count capped at " +
                              std::to_string(schedule.iterations));
  }
  if (options.no_noise) result.warnings.push_back(kNonPrivateWarning);

  const std::size_t k = w.k();
  const SimplexVector emp = Empirical(data, k);
  const double entropy_scale =
      options.entropy_weight == AMEntropyWeight::kAlphaScaled ? alpha : 1.0;

  SimplexVector current = Uniform(k);
  SimplexVector ag = Uniform(k);
  double prev_sum = 0.0;
  result.trace.schedule = schedule;
  result.trace.seed = rng.seed();
  result.trace.records.reserve(static_cast<std::size_t>(schedule.iterations));

  for (std::int64_t t = 1; t <= schedule.iterations; ++t) {
    const double eta = schedule.Eta(t);
    const double sum = prev_sum + eta;
    const double keep = prev_sum / sum;
    const double take = eta / sum;
    // At t = 1 the empty sum makes md = D_1.
    const SimplexVector md = t == 1 ? current : Blend(ag, keep, current, take);

    NoiseStream step_stream =
        rng.Derive("smoothing", static_cast<std::uint64_t>(t));
    OracleSample oracle = SmoothedOracle(md.values(), emp, w, schedule.sigma,
                                         step_stream, options.no_noise);

    const ProxProblem prox = ProxProblem::Create(
        eta, eta * entropy_scale, entropy_scale * prev_sum, std::move(oracle.g),
        current);
    SimplexVector next = CompositeProx(prox);
    ag = t == 1 ? next : Blend(ag, keep, next, take);

    result.trace.records.push_back({t, eta, sum, oracle.row});
    if (options.on_iterate) options.on_iterate(t, md, next, ag);
    current = std::move(next);
    prev_sum = sum;
  }
  result.trace.final_ag = ag;
  result.priv = ag;
  return result;
}

double AlphaStarAM(const PrivacyBudget& budget, double width, std::size_t k,
                   std::size_t n) {
  if (k < 2) throw Error(ErrorCode::kInvalidParams, "alpha* needs k >= 2");
  if (!(width > 0.0) || n == 0) {
    throw Error(ErrorCode::kInvalidParams, "alpha* needs width > 0, n >= 1");
  }
  return std::sqrt(std::log(1.0 / budget.delta)) * std::sqrt(width) /
         (std::pow(std::log(static_cast<double>(k)), 0.75) *
          std::sqrt(static_cast<double>(n) * budget.epsilon));
}

double RegimeThreshold(double width, const PrivacyBudget& budget,
                       std::size_t k) {
  if (k < 2) throw Error(ErrorCode::kInvalidParams, "regime needs k >= 2");
  return width * width * width * std::log(1.0 / budget.delta) /
         (budget.epsilon * std::pow(std::log(static_cast<double>(k)), 1.5));
}

bool RegimeCheck(double width, const PrivacyBudget& budget, std::size_t k,
                 std::size_t n) {
  return static_cast<double>(n) >= RegimeThreshold(width, budget, k);
}

RunReport ReleaseAM(const Dataset& data, const QueryWorkload& w,
                    const PrivacyBudget& budget, std::optional<double> alpha,
                    const NoiseStream& rng, const AMRunOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunReport report;
  report.algorithm = "dpam";
  report.k = w.k();
  report.m = w.m();
  report.n = data.n();
  report.epsilon = budget.epsilon;
  report.delta = budget.delta;
  report.seed = rng.seed();
  report.non_private = options.no_noise;
  report.entropy_weight =
      options.entropy_weight == AMEntropyWeight::kAlphaScaled ? "alpha_scaled"
                                                              : "listing";

  AMRunOptions run_options = options;
  if (!run_options.width && !run_options.schedule) {
    run_options.width = EstimateWidth(w, options.width_samples, rng);
  }
  report.width = run_options.width;
  report.alpha_auto = !alpha.has_value();
  if (alpha) {
    report.alpha = *alpha;
  } else {
    if (!report.width) {
      throw Error(ErrorCode::kInvalidParams,
                  "automatic alpha needs a width estimate");
    }
    report.alpha = AlphaStarAM(budget, report.width->mean, w.k(), data.n());
  }
  if (report.width) {
    report.regime_ok = RegimeCheck(report.width->mean, budget, w.k(), data.n());
  }

  AMResult run = RunDPAM(data, w, budget, report.alpha, rng, run_options);
  const auto solved = Clock::now();
  report.am_schedule = run.trace.schedule;
  if (!options.no_noise) {
    report.privacy_spent =
        AMPrivacySpent(run.trace.schedule.iterations, data.n(),
                       run.trace.schedule.sigma, budget.delta);
  }
  report.priv = run.priv;
  const SimplexVector emp = Empirical(data, w.k());
  report.empirical_error = MaxQueryError(emp, report.priv, w);
  if (options.population) {
    report.population_error = MaxQueryError(*options.population, report.priv, w);
  }
  report.answers = QueryAnswers(w, report.priv);
  report.warnings = std::move(run.warnings);
  if (report.regime_ok && !*report.regime_ok) {
    report.warnings.push_back(
        "n is below the sample-size threshold of the tuned DPAM rate");
  }
  const auto done = Clock::now();
  report.timings_ms["solve"] =
      std::chrono::duration<double, std::milli>(solved - start).count();
  report.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(done - start).count();
  return report;
}

}  // namespace dpqr
