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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dpqr/kernels.h"
#include "dpqr/objective.h"

namespace dpqr {
namespace {

TEST(Specs, ParseAndFormat) {
  EXPECT_EQ(DistributionSpec::Parse("uniform").kind, DistributionKind::kUniform);
  const DistributionSpec d = DistributionSpec::Parse("dirichlet(0.5)");
  EXPECT_EQ(d.concentration, 0.5);
  EXPECT_EQ(d.ToString(), "dirichlet(0.5)");
  EXPECT_EQ(DistributionSpec::Parse("sparse(3)").support, 3u);
  EXPECT_EQ(WorkloadSpec::Parse("parities(2)").bits, 2u);
  EXPECT_EQ(WorkloadSpec::Parse("random_box").ToString(), "random_box");
  for (const char* bad : {"gauss", "dirichlet()", "dirichlet(-1)", "sparse(0)",
                          "sparse(2.5)", "parities(x)", "dirichlet(1"}) {
    try {
      DistributionSpec::Parse(bad);
      WorkloadSpec::Parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec) << bad;
    }
  }
}

TEST(GenDistribution, Families) {
  NoiseStream rng(1, "dist");
  EXPECT_EQ(GenDistribution(5, DistributionSpec::Parse("uniform"), rng), Uniform(5));
  const SimplexVector point = GenDistribution(6, DistributionSpec::Parse("sparse(1)"), rng);
  int nonzero = 0;
  for (double x : point.values()) nonzero += x > 0.0;
  EXPECT_EQ(nonzero, 1);
  const SimplexVector three = GenDistribution(10, DistributionSpec::Parse("sparse(3)"), rng);
  nonzero = 0;
  for (double x : three.values()) nonzero += x > 0.0;
  EXPECT_EQ(nonzero, 3);
  EXPECT_THROW(GenDistribution(1, DistributionSpec::Parse("uniform"), rng), Error);
  EXPECT_THROW(GenDistribution(3, DistributionSpec::Parse("sparse(4)"), rng), Error);
}

TEST(GenDistribution, DirichletMeans) {
  NoiseStream rng(2, "dirichlet");
  const int draws = 100000;
  std::vector<double> s(4, 0.0), ss(4, 0.0);
  for (int i = 0; i < draws; ++i) {
    const SimplexVector p = GenDistribution(4, DistributionSpec::Parse("dirichlet(1.0)"), rng);
    for (std::size_t z = 0; z < 4; ++z) {
      s[z] += p[z];
      ss[z] += p[z] * p[z];
    }
  }
  for (std::size_t z = 0; z < 4; ++z) {
    const double mean = s[z] / draws;
    const double se = std::sqrt((ss[z] / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, 0.25, 3 * se);
  }
  NoiseStream small(3, "dirichlet");
  for (int i = 0; i < 100; ++i) {
    EXPECT_NO_THROW(GenDistribution(5, DistributionSpec::Parse("dirichlet(0.05)"), small));
  }
}

TEST(GenWorkload, Parities) {
  const QueryWorkload raw = ParityRows(2);
  ASSERT_EQ(raw.m(), 4u);
  std::set<std::vector<double>> distinct;
  for (std::size_t i = 0; i < 4; ++i) {
    distinct.emplace(raw.row(i).begin(), raw.row(i).end());
    for (double x : raw.row(i)) EXPECT_TRUE(x == 1.0 || x == -1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      const double ip = Dot(raw.row(i), raw.row(j)) / 4.0;
      EXPECT_EQ(ip, i == j ? 1.0 : 0.0);
    }
  }
  EXPECT_EQ(distinct.size(), 4u);
  NoiseStream rng(4, "w");
  const QueryWorkload sym = GenWorkload(4, 0, WorkloadSpec::Parse("parities(2)"), rng);
  EXPECT_EQ(sym.m(), 8u);
  EXPECT_TRUE(IsClosedUnderNegation(sym));
  EXPECT_THROW(GenWorkload(8, 0, WorkloadSpec::Parse("parities(2)"), rng), Error);
}

TEST(GenWorkload, RandomFamilies) {
  NoiseStream rng(5, "w");
  const QueryWorkload sign = GenWorkload(12, 3, WorkloadSpec::Parse("random_sign"), rng);
  EXPECT_EQ(sign.m(), 6u);
  for (double x : sign.flat()) EXPECT_TRUE(x == 1.0 || x == -1.0);
  const QueryWorkload box = GenWorkload(12, 5, WorkloadSpec::Parse("random_box"), rng);
  EXPECT_EQ(box.m(), 10u);
  for (double x : box.flat()) {
    EXPECT_GE(x, -1.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(SampleDataset, PointMassAndBinomial) {
  NoiseStream rng(6, "data");
  const Dataset point = SampleDataset(SimplexVector::Create({0, 0, 1, 0}), 1000, rng);
  for (auto z : point.points()) EXPECT_EQ(z, 2u);
  const std::size_t n = 100000;
  const Dataset d = SampleDataset(SimplexVector::Create({0.7, 0.3}), n, rng);
  const SimplexVector emp = Empirical(d, 2);
  EXPECT_NEAR(emp[0], 0.7, 3 * std::sqrt(0.21 / n));
  NoiseStream a(7, "data"), b(7, "data");
  EXPECT_EQ(SampleDataset(emp, 50, a), SampleDataset(emp, 50, b));
  EXPECT_THROW(SampleDataset(emp, 0, a), Error);
}

TEST(SampleSynthetic, MatchesReleasedDistribution) {
  NoiseStream rng(8, "sample");
  const SimplexVector near_point = SimplexVector::Create({1e-300, 1.0, 1e-300});
  for (auto z : SampleSynthetic(near_point, 1000, rng).points()) EXPECT_EQ(z, 1u);
  const SimplexVector p = SimplexVector::Create({0.1, 0.2, 0.3, 0.4});
  const std::size_t count = 100000;
  const SimplexVector emp = Empirical(SampleSynthetic(p, count, rng), 4);
  double worst = 0.0;
  for (double x : p.values()) worst = std::max(worst, x * (1 - x));
  for (std::size_t z = 0; z < 4; ++z) {
    EXPECT_LE(std::abs(emp[z] - p[z]), 3 * std::sqrt(worst / count));
  }
}

TEST(FitLogLogSlope, ExactPowerLaw) {
  std::vector<double> x, y;
  for (int e = 8; e <= 14; ++e) {
    x.push_back(std::ldexp(1.0, e));
    y.push_back(3.0 * std::pow(x.back(), -0.5));
  }
  const SlopeFit fit = FitLogLogSlope(x, y);
  EXPECT_NEAR(fit.slope, -0.5, 1e-9);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-9);
  EXPECT_NEAR(fit.std_error, 0.0, 1e-9);
  EXPECT_THROW(FitLogLogSlope(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
}

ExperimentPlan SmallPlan() {
  ExperimentPlan plan;
  plan.k = 6;
  plan.m = 4;
  plan.n_grid = {200, 800};
  plan.eps_grid = {0.5, 4.0};
  plan.repetitions = 4;
  plan.master_seed = 11;
  return plan;
}

TEST(RunExperiment, ShapeAndInvariants) {
  const ExperimentResult r = RunExperiment(SmallPlan());
  ASSERT_EQ(r.cells.size(), 2u * 2 * 2);
  for (const CellRecord& c : r.cells) {
    EXPECT_EQ(c.failures, 0u);
    ASSERT_EQ(c.repetitions.size(), 4u);
    std::set<std::vector<double>> distinct;
    for (const RepetitionRecord& rep : c.repetitions) {
      EXPECT_GE(rep.population_error, 0.0);
      EXPECT_LE(std::abs(rep.population_error - rep.empirical_error),
                rep.sampling_forward + rep.sampling_backward + 1e-12);
      distinct.insert(rep.priv);
    }
    EXPECT_EQ(distinct.size(), 4u);
    if (c.algorithm == "dpam") {
      EXPECT_TRUE(c.regime_ok.has_value());
    }
  }
  EXPECT_EQ(r.slopes.size(), 4u);
  ASSERT_NE(r.Find("dpfw", 800, 4.0), nullptr);
  EXPECT_EQ(r.Find("dpfw", 801, 4.0), nullptr);
}

TEST(RunExperiment, IndependentOfWorkerCount) {
  const int saved = kernels::NumWorkers();
  kernels::SetNumWorkers(1);
  const ExperimentResult a = RunExperiment(SmallPlan());
  kernels::SetNumWorkers(4);
  const ExperimentResult b = RunExperiment(SmallPlan());
  kernels::SetNumWorkers(saved);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].population_mean, b.cells[i].population_mean);
    for (std::size_t j = 0; j < a.cells[i].repetitions.size(); ++j) {
      EXPECT_EQ(a.cells[i].repetitions[j].priv, b.cells[i].repetitions[j].priv);
    }
  }
}

TEST(ExperimentPlan, Validation) {
  ExperimentPlan plan = SmallPlan();
  plan.repetitions = 0;
  EXPECT_THROW(plan.Validate(), Error);
  plan = SmallPlan();
  plan.eps_grid = {0.0};
  EXPECT_THROW(plan.Validate(), Error);
  plan = SmallPlan();
  plan.algorithms = {"mwem"};
  EXPECT_THROW(plan.Validate(), Error);
  plan = SmallPlan();
  plan.alpha = INFINITY;
  EXPECT_THROW(plan.Validate(), Error);
  EXPECT_NO_THROW(DefaultPlan().Validate());
  EXPECT_EQ(DefaultPlan().n_grid.size(), 7u);
}

}  // namespace
}  // namespace dpqr
