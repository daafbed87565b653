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

#include "dpqr/entropy.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "testkit/testkit.h"

namespace dpqr {
namespace {

std::vector<double> RandomSimplex(std::mt19937_64& gen, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) s += (x = e(gen));
  for (double& x : v) x /= s;
  return v;
}

TEST(NegEntropy, KnownValues) {
  EXPECT_NEAR(NegEntropy(Uniform(2)), -std::log(2.0), 1e-15);
  EXPECT_EQ(NegEntropy(SimplexVector::Create({0.0, 1.0, 0.0})), 0.0);
  EXPECT_NEAR(NegEntropy(SimplexVector::Create({0.25, 0.75})),
              -0.562335144618808, 1e-14);
}

TEST(NegEntropy, WithinRange) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 100; ++i) {
    const auto d = SimplexVector::Create(RandomSimplex(gen, 6));
    const double h = NegEntropy(d);
    EXPECT_LE(h, 0.0);
    EXPECT_GE(h, -std::log(6.0) - 1e-12);
  }
}

TEST(LogSumExp, StableAndShifted) {
  const std::vector<double> zeros(3, 0.0);
  EXPECT_NEAR(LogSumExp(zeros), std::log(3.0), 1e-15);
  const std::vector<double> shifted(4, 2.5);
  EXPECT_NEAR(LogSumExp(shifted), 2.5 + std::log(4.0), 1e-14);
  const std::vector<double> big{1000.0, 0.0};
  EXPECT_EQ(LogSumExp(big), 1000.0);
  const std::vector<double> huge{1e308, 1e308};
  EXPECT_TRUE(std::isfinite(LogSumExp(huge)));
}

TEST(Softmax, ValuesAndShiftInvariance) {
  const SimplexVector u = Softmax(std::vector<double>(5, 0.0));
  for (double x : u.values()) EXPECT_NEAR(x, 0.2, 1e-15);
  const SimplexVector p = Softmax(std::vector<double>{0.0, std::log(3.0)});
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> y(7), y7(7);
    for (std::size_t z = 0; z < 7; ++z) {
      y[z] = n(gen);
      y7[z] = y[z] + 7.0;
    }
    const SimplexVector a = Softmax(y), b = Softmax(y7);
    for (std::size_t z = 0; z < 7; ++z) EXPECT_NEAR(a[z], b[z], 1e-14);
  }
}

// H*(y) is the max over the simplex of <y, D> - H(D), attained at softmax(y).
TEST(Softmax, FenchelPairOnGrid) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto grid = testkit::GridSpec::Create(300, 3);
  for (int i = 0; i < 5; ++i) {
    const std::vector<double> y{u(gen), u(gen), u(gen)};
    const auto best = testkit::GridMinimize(grid, [&](std::span<const double> d) {
      double lin = 0.0;
      for (std::size_t z = 0; z < 3; ++z) lin += y[z] * d[z];
      return -(lin - testkit::Entropy(d));
    });
    const double bound = grid.L1Bound() * (2.0 + 1.0 + std::log(300.0));
    EXPECT_NEAR(-best.value, LogSumExp(y), bound);
    EXPECT_LE(-best.value, LogSumExp(y) + 1e-12);
    const SimplexVector p = Softmax(y);
    for (std::size_t z = 0; z < 3; ++z) {
      EXPECT_NEAR(best.point[z], p[z], 2.0 * grid.L1Bound());
    }
  }
}

TEST(KlDivergence, KnownValuesAndBregmanIdentity) {
  const SimplexVector half = Uniform(2);
  EXPECT_EQ(KlDivergence(half, half), 0.0);
  EXPECT_NEAR(KlDivergence(SimplexVector::Create({1.0, 0.0}), half),
              std::log(2.0), 1e-15);
  EXPECT_THROW(KlDivergence(half, SimplexVector::Create({1.0, 0.0})), Error);
  std::mt19937_64 gen(4);
  for (int i = 0; i < 100; ++i) {
    const auto d = SimplexVector::Create(RandomSimplex(gen, 5));
    const auto a = SimplexVector::Create(RandomSimplex(gen, 5));
    double grad_term = 0.0;
    for (std::size_t z = 0; z < 5; ++z) {
      grad_term += (1.0 + std::log(a[z])) * (d[z] - a[z]);
    }
    const double bregman = NegEntropy(d) - NegEntropy(a) - grad_term;
    EXPECT_NEAR(KlDivergence(d, a), bregman, 1e-10);
    EXPECT_GE(KlDivergence(d, a), 0.0);
  }
}

TEST(ProxProblem, ValidatesInvariants) {
  EXPECT_THROW(ProxProblem::Create(1, 0, 0, {0, 0}, Uniform(2)), Error);
  EXPECT_THROW(ProxProblem::Create(1, 1, -1, {0, 0}, Uniform(2)), Error);
  EXPECT_THROW(ProxProblem::Create(1, 1, 0, {0}, Uniform(2)), Error);
  try {
    ProxProblem::Create(1, 1, 1, {0, 0}, SimplexVector::Create({1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAnchorHasZero);
  }
}

TEST(CompositeProx, TrivialCases) {
  const auto p = ProxProblem::Create(1, 1, 0, {0, 0, 0}, Uniform(3));
  const SimplexVector dp = CompositeProx(p);
  for (double x : dp.values()) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  const auto q = ProxProblem::Create(0, 2.5, 0, {4, -1, 3}, Uniform(3));
  const SimplexVector dq = CompositeProx(q);
  for (double x : dq.values()) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
}

TEST(CompositeProx, WithoutAnchorIsSoftmax) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0), b(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(gen), bb = b(gen);
    std::vector<double> g(4), y(4);
    for (std::size_t z = 0; z < 4; ++z) {
      g[z] = u(gen);
      y[z] = -(a / bb) * g[z] - 1.0;
    }
    const SimplexVector prox =
        CompositeProx(ProxProblem::Create(a, bb, 0.0, g, Uniform(4)));
    const SimplexVector soft = Softmax(y);
    for (std::size_t z = 0; z < 4; ++z) EXPECT_NEAR(prox[z], soft[z], 1e-12);
  }
}

TEST(CompositeProx, MatchesBruteForceAndIsPositive) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> ua(-5.0, 5.0), ub(0.05, 5.0),
      uc(0.0, 5.0);
  for (int i = 0; i < 30; ++i) {
    std::vector<double> g(3);
    for (double& x : g) x = ua(gen) / 5.0;
    const auto p = ProxProblem::Create(ua(gen), ub(gen), uc(gen), g,
                                       SimplexVector::Create(RandomSimplex(gen, 3)));
    const SimplexVector closed = CompositeProx(p);
    const SimplexVector brute = testkit::BruteForceProx(p);
    for (std::size_t z = 0; z < 3; ++z) {
      EXPECT_NEAR(closed[z], brute[z], 1e-6);
      EXPECT_GT(closed[z], 0.0);
    }
    EXPECT_LE(p.Objective(closed.values()), p.Objective(brute.values()) + 1e-12);
  }
}

TEST(CompositeProx, ExtremeExponentsStayFinite) {
  const auto p = ProxProblem::Create(1e6, 1e-3, 0.0, {1.0, -1.0, 0.0}, Uniform(3));
  const SimplexVector d = CompositeProx(p);
  EXPECT_NEAR(d[1], 1.0, 1e-12);
  EXPECT_GT(d[0], 0.0);
  EXPECT_TRUE(std::isfinite(NegEntropy(d)));
}

}  // namespace
}  // namespace dpqr
