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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dpqr {

double NegEntropy(std::span<const double> d) {
  double h = 0.0;
  for (double v : d) {
    if (v > 0.0) h += v * std::log(v);
  }
  return h;
}

double LogSumExp(std::span<const double> y) {
  if (y.empty()) throw Error(ErrorCode::kInvalidArgument, "empty input");
  const double mx = *std::max_element(y.begin(), y.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : y) s += std::exp(v - mx);
  return mx + std::log(s);
}

SimplexVector Softmax(std::span<const double> y) {
  if (y.empty()) throw Error(ErrorCode::kInvalidArgument, "empty input");
  const double mx = *std::max_element(y.begin(), y.end());
  std::vector<double> out(y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = std::exp(y[i] - mx);
    s += out[i];
  }
  for (double& v : out) v /= s;
  return SimplexVector::FromTrusted(std::move(out));
}

double KlDivergence(const SimplexVector& d, const SimplexVector& anchor) {
  if (d.size() != anchor.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "KL arguments differ in size");
  }
  double kl = 0.0;
  for (std::size_t z = 0; z < d.size(); ++z) {
    if (d[z] <= 0.0) continue;
    if (anchor[z] <= 0.0) {
      throw Error(ErrorCode::kAnchorHasZero,
                  "anchor has zero mass at index " + std::to_string(z));
    }
    kl += d[z] * std::log(d[z] / anchor[z]);
  }
  return std::max(kl, 0.0);
}

ProxProblem ProxProblem::Create(double a, double b, double c,
                                std::vector<double> g, SimplexVector anchor) {
  if (!(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "B must be > 0");
  if (!(c >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be >= 0");
  if (g.size() != anchor.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "g and anchor differ in size");
  }
  for (std::size_t z = 0; z < anchor.size(); ++z) {
    if (!(anchor[z] > 0.0)) {
      throw Error(ErrorCode::kAnchorHasZero,
                  "anchor must be strictly positive (index " +
                      std::to_string(z) + ")");
    }
  }
  return ProxProblem{a, b, c, std::move(g), std::move(anchor)};
}

double ProxProblem::Objective(std::span<const double> d) const {
  double linear = 0.0;
  double kl = 0.0;
  for (std::size_t z = 0; z < d.size(); ++z) {
    linear += g[z] * d[z];
    if (d[z] > 0.0) kl += d[z] * std::log(d[z] / anchor[z]);
  }
  return a * linear + b * NegEntropy(d) + c * kl;
}

SimplexVector CompositeProx(const ProxProblem& p) {
  const std::size_t k = p.g.size();
  const double scale = 1.0 / (p.b + p.c);
  std::vector<double> exponent(k);
  for (std::size_t i = 0; i < k; ++i) {
    exponent[i] = (-p.a * p.g[i] - p.b + p.c * std::log(p.anchor[i])) * scale;
  }
  const double lse = LogSumExp(exponent);
  std::vector<double> out(k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::max(std::exp(exponent[i] - lse), kProxFloor);
    s += out[i];
  }
  for (double& v : out) v /= s;
  return SimplexVector::FromTrusted(std::move(out));
}

}  // namespace dpqr
