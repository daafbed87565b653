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

#include <gtest/gtest.h>

#include <cmath>

#include "dpqr/entropy.h"
#include "dpqr/harness.h"
#include "testkit/testkit.h"

namespace dpqr {
namespace {

const QueryWorkload kToy = QueryWorkload::Create({{1, -1}, {-1, 1}}, true);

Dataset ToyData(std::size_t n, std::size_t ones) {
  std::vector<std::uint32_t> pts(n, 0);
  for (std::size_t i = 0; i < ones; ++i) pts[i] = 1;
  return Dataset::Create(pts, 2);
}

struct Instance {
  QueryWorkload w;
  Dataset data;
};

Instance Medium(std::uint64_t seed) {
  NoiseStream rng(seed, "dpfw-test");
  NoiseStream wr = rng.Derive("w"), pr = rng.Derive("p"), dr = rng.Derive("d");
  QueryWorkload w = GenWorkload(8, 6, WorkloadSpec::Parse("random_sign"), wr);
  const SimplexVector p = GenDistribution(8, DistributionSpec::Parse("dirichlet(1)"), pr);
  return {std::move(w), SampleDataset(p, 500, dr)};
}

FWSchedule ScheduleFor(std::int64_t t, double alpha, double dinf) {
  return {t, std::min(1.0, 2.0 * std::sqrt(alpha / (t * dinf))), 0.0, false};
}

TEST(RunDPFW, Deterministic) {
  const Instance in = Medium(1);
  const PrivacyBudget b = PrivacyBudget::Create(1.0, 1e-6);
  const NoiseStream rng(7, "run");
  const FWResult a = RunDPFW(in.data, in.w, b, RegParam::Create(0.1), rng);
  const FWResult c = RunDPFW(in.data, in.w, b, RegParam::Create(0.1), rng);
  EXPECT_EQ(a.q_out.vector, c.q_out.vector);
  EXPECT_EQ(a.q_out.weights, c.q_out.weights);
  ASSERT_EQ(a.trace.records.size(), c.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_EQ(a.trace.records[i].row, c.trace.records[i].row);
  }
  EXPECT_EQ(a.trace.output_index, c.trace.output_index);
  const FWResult other = RunDPFW(in.data, in.w, b, RegParam::Create(0.1),
                                 NoiseStream(8, "run"));
  EXPECT_NE(a.q_out.vector, other.q_out.vector);
}

TEST(RunDPFW, TraceShapeAndHullInvariant) {
  const Instance in = Medium(2);
  const PrivacyBudget b = PrivacyBudget::Create(2.0, 1e-6);
  FWRunOptions opts;
  std::int64_t calls = 0;
  opts.on_iterate = [&](std::int64_t, const DualPoint& q) {
    ++calls;
    q.Validate(in.w);
    for (double v : *q.weights) ASSERT_GE(v, 0.0);
  };
  const FWResult r = RunDPFW(in.data, in.w, b, RegParam::Create(0.2),
                             NoiseStream(3, "run"), opts);
  const std::int64_t t = r.trace.schedule.iterations;
  EXPECT_EQ(static_cast<std::int64_t>(r.trace.records.size()), t);
  EXPECT_EQ(calls, t + 1);
  EXPECT_GE(r.trace.output_index, 0);
  EXPECT_LT(r.trace.output_index, t);
  EXPECT_NO_THROW(r.q_out.Validate(in.w));
  EXPECT_TRUE(r.warnings.empty());
  for (std::int64_t i = 0; i < t; ++i) EXPECT_EQ(r.trace.records[i].t, i);
  EXPECT_FALSE(r.trace.MeanGap().has_value());
}

TEST(RunDPFW, NoNoiseGapDecreases) {
  const Dataset data = ToyData(100, 30);
  const PrivacyBudget b = PrivacyBudget::Create(1.0, 1e-6);
  FWRunOptions opts;
  opts.no_noise = true;
  opts.record_gap = true;
  opts.schedule = ScheduleFor(400, 0.1, 2.0);
  const FWResult r = RunDPFW(data, kToy, b, RegParam::Create(0.1),
                             NoiseStream(1, "run"), opts);
  ASSERT_TRUE(r.trace.MeanGap());
  EXPECT_LT(*r.trace.MeanGap(), *r.trace.records.front().gap);
  EXPECT_EQ(r.trace.schedule.lambda, 0.0);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.warnings.back(), kNonPrivateWarning);
}

TEST(RunDPFW, MeanGapNonIncreasingInT) {
  const Instance in = Medium(4);
  const double alpha = 0.2;
  const Diameters diam = ComputeDiameters(in.w);
  double prev = INFINITY;
  for (std::int64_t t : {10, 100, 1000}) {
    FWRunOptions opts;
    opts.no_noise = true;
    opts.record_gap = true;
    opts.schedule = ScheduleFor(t, alpha, diam.dinf);
    const FWResult r = RunDPFW(in.data, in.w, PrivacyBudget::Create(1, 1e-6),
                               RegParam::Create(alpha), NoiseStream(1, "run"), opts);
    const double gap = *r.trace.MeanGap();
    EXPECT_LE(gap, prev);
    prev = gap;
  }
}

TEST(RunDPFW, PopulationGapRecorded) {
  const Dataset data = ToyData(50, 10);
  FWRunOptions opts;
  opts.record_gap = true;
  opts.population = SimplexVector::Create({0.7, 0.3});
  opts.schedule = ScheduleFor(20, 0.5, 2.0);
  const FWResult r = RunDPFW(data, kToy, PrivacyBudget::Create(1, 1e-6),
                             RegParam::Create(0.5), NoiseStream(1, "run"), opts);
  for (const auto& rec : r.trace.records) {
    ASSERT_TRUE(rec.population_gap.has_value());
    EXPECT_GE(*rec.population_gap, -1e-12);
  }
}

TEST(RunDPFW, Errors) {
  const Dataset data = ToyData(10, 3);
  const PrivacyBudget b = PrivacyBudget::Create(1, 1e-6);
  EXPECT_THROW(RunDPFW(data, kToy, b, RegParam::Create(0.0), NoiseStream(1, "r")), Error);
  FWRunOptions bad;
  bad.schedule = FWSchedule{0, 0.5, 1.0, false};
  try {
    RunDPFW(data, kToy, b, RegParam::Create(0.1), NoiseStream(1, "r"), bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSchedule);
  }
  const FWResult r = RunDPFW(data, QueryWorkload::Create({{1, 0}, {0, 1}}), b,
                             RegParam::Create(0.1), NoiseStream(1, "r"));
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("negation"), std::string::npos);
}

TEST(KKTMap, Identities) {
  const DualPoint zero{{0.0, 0.0, 0.0}, std::nullopt};
  const SimplexVector flat = KKTMap(zero, 0.3);
  for (double x : flat.values()) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  const std::vector<double> p{0.1, 0.6, 0.3};
  DualPoint q{{}, std::nullopt};
  for (double x : p) q.vector.push_back(0.25 * std::log(x));
  const SimplexVector back = KKTMap(q, 0.25);
  for (std::size_t z = 0; z < 3; ++z) EXPECT_NEAR(back[z], p[z], 1e-12);
  DualPoint shifted = q;
  for (double& x : shifted.vector) x += 4.0;
  const SimplexVector s = KKTMap(shifted, 0.25);
  for (std::size_t z = 0; z < 3; ++z) EXPECT_NEAR(s[z], back[z], 1e-14);
  EXPECT_THROW(KKTMap(q, 0.0), Error);
}

TEST(KKTMap, MatchesGridArgmin) {
  const auto grid = testkit::GridSpec::Create(400, 3);
  const DualPoint q{{0.4, -0.8, 0.1}, std::nullopt};
  const double alpha = 0.7;
  const auto best = testkit::GridMinimize(grid, [&](std::span<const double> d) {
    double lin = 0.0;
    for (std::size_t z = 0; z < 3; ++z) lin -= q.vector[z] * d[z];
    return lin + alpha * testkit::Entropy(d);
  });
  const SimplexVector p = KKTMap(q, alpha);
  for (std::size_t z = 0; z < 3; ++z) EXPECT_NEAR(best.point[z], p[z], 2 * grid.L1Bound());
}

TEST(AlphaStarFW, FormulaAndScaling) {
  const PrivacyBudget b = PrivacyBudget::Create(1.0, 1e-6);
  EXPECT_NEAR(AlphaStarFW(b, 10, 16, 1000), 0.0658644851531760, 1e-14);
  EXPECT_LT(AlphaStarFW(b, 10, 16, 2000), AlphaStarFW(b, 10, 16, 1000));
  EXPECT_NEAR(AlphaStarFW(b, 10, 16, 4000) / AlphaStarFW(b, 10, 16, 1000),
              std::pow(4.0, -0.4), 1e-12);
  EXPECT_THROW(AlphaStarFW(b, 10, 1, 1000), Error);
  EXPECT_THROW(AlphaStarFW(b, 1, 16, 1000), Error);
  EXPECT_THROW(AlphaStarFW(b, 10, 16, 0), Error);
}

TEST(ReleaseFW, ReportContents) {
  const Instance in = Medium(5);
  const PrivacyBudget b = PrivacyBudget::Create(1.0, 1e-6);
  const RunReport r = ReleaseFW(in.data, in.w, b, std::nullopt, NoiseStream(9, "run"));
  EXPECT_EQ(r.algorithm, "dpfw");
  EXPECT_TRUE(r.alpha_auto);
  EXPECT_DOUBLE_EQ(r.alpha, AlphaStarFW(b, in.w.m(), in.w.k(), in.data.n()));
  for (double x : r.priv.values()) EXPECT_GT(x, 0.0);
  ASSERT_TRUE(r.privacy_spent);
  EXPECT_NEAR(*r.privacy_spent, 1.0, 1e-12);
  EXPECT_EQ(r.answers, QueryAnswers(in.w, r.priv));
  EXPECT_DOUBLE_EQ(r.empirical_error,
                   MaxQueryError(Empirical(in.data, in.w.k()), r.priv, in.w));
  EXPECT_EQ(r.seed, 9u);
  const RunReport again = ReleaseFW(in.data, in.w, b, std::nullopt, NoiseStream(9, "run"));
  EXPECT_EQ(again.priv, r.priv);
}

TEST(ReleaseFW, NonPrivateLimitOnToy) {
  const Dataset data = ToyData(200, 50);
  const double alpha = 0.05;
  FWRunOptions opts;
  opts.no_noise = true;
  opts.schedule_options.max_iterations = 20000;
  const RunReport r = ReleaseFW(data, kToy, PrivacyBudget::Create(1e6, 1e-6), alpha,
                                NoiseStream(1, "run"), opts);
  EXPECT_TRUE(r.non_private);
  EXPECT_FALSE(r.privacy_spent);
  EXPECT_LE(r.empirical_error, alpha * std::log(2.0) + 0.02);
}

}  // namespace
}  // namespace dpqr
