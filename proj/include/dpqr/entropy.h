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

#ifndef DPQR_ENTROPY_H_
#define DPQR_ENTROPY_H_

#include <span>
#include <vector>

#include "dpqr/core.h"

namespace dpqr {

inline constexpr double kProxFloor = 1e-300;

// sum_z d(z) log d(z), with 0 log 0 = 0. Lies in [-log k, 0] on the simplex.
double NegEntropy(std::span<const double> d);
inline double NegEntropy(const SimplexVector& d) { return NegEntropy(d.values()); }

// log sum_j exp(y_j), evaluated after subtracting max(y).
double LogSumExp(std::span<const double> y);

// exp(y_j) / sum_i exp(y_i). Invariant under y -> y + c.
SimplexVector Softmax(std::span<const double> y);

// KL(d || anchor). Throws kAnchorHasZero if anchor(z) = 0 < d(z).
double KlDivergence(const SimplexVector& d, const SimplexVector& anchor);

// Minimizer over the simplex of
//   a <g, D> + b H(D) + c KL(D, anchor),
// with b > 0, c >= 0 and a strictly positive anchor.
struct ProxProblem {
  double a;
  double b;
  double c;
  std::vector<double> g;
  SimplexVector anchor;

  static ProxProblem Create(double a, double b, double c, std::vector<double> g,
                            SimplexVector anchor);

  double Objective(std::span<const double> d) const;
};

// D(i) proportional to exp((-a g_i - b + c log anchor_i) / (b + c)),
// normalized in log space and floored at kProxFloor.
SimplexVector CompositeProx(const ProxProblem& p);

}  // namespace dpqr

#endif  // DPQR_ENTROPY_H_
