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

#include "dpqr/dpfw.h"

#include <chrono>
#include <cmath>

#include "dpqr/entropy.h"
#include "dpqr/kernels.h"
#include "dpqr/objective.h"

namespace dpqr {

std::optional<double> FWTrace::MeanGap() const {
  if (records.empty() || !records.front().gap) return std::nullopt;
  double s = 0.0;
  for (const FWIterationRecord& r : records) s += *r.gap;
  return s / static_cast<double>(records.size());
}

FWResult RunDPFW(const Dataset& data, const QueryWorkload& w,
                 const PrivacyBudget& budget, RegParam alpha,
                 const NoiseStream& rng, const FWRunOptions& options) {
  if (!(alpha.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "DPFW requires alpha > 0");
  }
  if (data.k() != w.k()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset universe size differs from workload width");
  }
  FWResult result;
  if (!IsClosedUnderNegation(w)) {
    result.warnings.push_back("workload is not closed under negation");
  }
  FWSchedule schedule;
  if (options.schedule) {
    schedule = *options.schedule;
  } else {
    const Diameters diam = ComputeDiameters(w);
    schedule = MakeFWSchedule(budget, alpha, diam.d1, diam.dinf, w.m(),
                              data.n(), options.schedule_options);
  }
  if (schedule.iterations < 1 || !(schedule.gamma > 0.0) ||
      schedule.gamma > 1.0 || schedule.lambda < 0.0) {
    throw Error(ErrorCode::kDegenerateSchedule, "invalid FW schedule");
  }
  if (schedule.capped) {
    result.warnings.push_back("iteration count capped at " +
                              std::to_string(schedule.iterations));
  }
  if (options.no_noise) {
    schedule.lambda = 0.0;
    result.warnings.push_back(kNonPrivateWarning);
  }

  const std::size_t k = w.k();
  const std::size_t m = w.m();
  const std::int64_t iterations = schedule.iterations;
  const double gamma = schedule.gamma;
  const SimplexVector emp = Empirical(data, k);

  NoiseStream output_stream = rng.Derive("output");
  const std::int64_t output_index = static_cast<std::int64_t>(
      output_stream.NextU64() % static_cast<std::uint64_t>(iterations));

  DualPoint q;
  q.vector.assign(w.row(0).begin(), w.row(0).end());
  q.weights = std::vector<double>(m, 0.0);
  (*q.weights)[0] = 1.0;

  result.trace.schedule = schedule;
  result.trace.seed = rng.seed();
  result.trace.output_index = output_index;
  result.trace.records.reserve(static_cast<std::size_t>(iterations));

  std::vector<double> scaled(k);
  std::vector<double> grad(k);
  std::vector<double> scores(m);
  for (std::int64_t t = 0; t < iterations; ++t) {
    if (options.on_iterate) options.on_iterate(t, q);
    if (t == output_index) result.q_out = q;

    for (std::size_t z = 0; z < k; ++z) scaled[z] = q.vector[z] / alpha.alpha;
    const SimplexVector p = Softmax(scaled);
    for (std::size_t z = 0; z < k; ++z) grad[z] = emp[z] - p[z];
    kernels::RowScores(w, grad, scores);

    FWIterationRecord rec{t, 0, gamma, std::nullopt, std::nullopt};
    if (options.record_gap) {
      rec.gap = scores[kernels::ArgMax(scores)] - Dot(grad, q.vector);
      if (options.population) {
        rec.population_gap = FWGap(q.vector, *options.population, alpha.alpha, w);
      }
    }

    NoiseStream step_stream = rng.Derive("rnm", static_cast<std::uint64_t>(t));
    const std::size_t s = ReportNoisyMax(scores, schedule.lambda, step_stream);
    rec.row = s;
    result.trace.records.push_back(rec);

    const std::span<const double> row = w.row(s);
    for (std::size_t z = 0; z < k; ++z) {
      q.vector[z] += gamma * (row[z] - q.vector[z]);
    }
    for (double& v : *q.weights) v *= 1.0 - gamma;
    (*q.weights)[s] += gamma;
  }
  if (options.on_iterate) options.on_iterate(iterations, q);
  return result;
}

SimplexVector KKTMap(const DualPoint& q, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidAlpha, "alpha <= 0");
  std::vector<double> scaled(q.vector.size());
  for (std::size_t z = 0; z < scaled.size(); ++z) scaled[z] = q.vector[z] / alpha;
  return Softmax(scaled);
}

double AlphaStarFW(const PrivacyBudget& budget, std::size_t num_queries,
                   std::size_t k, std::size_t n) {
  if (k < 2) throw Error(ErrorCode::kInvalidParams, "alpha* needs k >= 2");
  if (num_queries < 2) {
    throw Error(ErrorCode::kInvalidParams, "alpha* needs |Q| >= 2");
  }
  if (n == 0) throw Error(ErrorCode::kInvalidParams, "alpha* needs n >= 1");
  const double en = budget.epsilon * static_cast<double>(n);
  return std::pow(std::log(1.0 / budget.delta), 0.2) *
         std::pow(std::log(static_cast<double>(num_queries)), 0.4) /
         (std::pow(en, 0.4) *
          std::pow(std::log(static_cast<double>(k)), 0.8));
}

RunReport ReleaseFW(const Dataset& data, const QueryWorkload& w,
                    const PrivacyBudget& budget, std::optional<double> alpha,
                    const NoiseStream& rng, const FWRunOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunReport report;
  report.algorithm = "dpfw";
  report.k = w.k();
  report.m = w.m();
  report.n = data.n();
  report.epsilon = budget.epsilon;
  report.delta = budget.delta;
  report.alpha_auto = !alpha.has_value();
  report.alpha = alpha ? *alpha : AlphaStarFW(budget, w.m(), w.k(), data.n());
  report.seed = rng.seed();
  report.non_private = options.no_noise;
  report.t_diameter = options.schedule_options.t_diameter;

  FWResult run = RunDPFW(data, w, budget, RegParam::Create(report.alpha), rng,
                         options);
  const auto solved = Clock::now();
  report.fw_schedule = run.trace.schedule;
  report.output_iterate = run.trace.output_index;
  if (!options.no_noise && run.trace.schedule.lambda > 0.0) {
    const Diameters diam = ComputeDiameters(w);
    report.privacy_spent =
        AdvancedComposition(
            FWStepEpsilon(diam.d1, data.n(), run.trace.schedule.lambda),
            run.trace.schedule.iterations, budget.delta)
            .epsilon;
  }
  report.priv = KKTMap(run.q_out, report.alpha);
  const SimplexVector emp = Empirical(data, w.k());
  report.empirical_error = MaxQueryError(emp, report.priv, w);
  if (options.population) {
    report.population_error = MaxQueryError(*options.population, report.priv, w);
  }
  report.answers = QueryAnswers(w, report.priv);
  report.warnings = std::move(run.warnings);
  const auto done = Clock::now();
  report.timings_ms["solve"] =
      std::chrono::duration<double, std::milli>(solved - start).count();
  report.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(done - start).count();
  return report;
}

}  // namespace dpqr
