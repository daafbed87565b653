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

#include "dpqr/core.h"

#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "dpqr/kernels.h"

namespace dpqr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAnchorHasZero: return "AnchorHasZero";
    case ErrorCode::kDegenerateSchedule: return "DegenerateSchedule";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kGridTooLarge: return "GridTooLarge";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

SimplexVector SimplexVector::Create(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "simplex vector must be nonempty");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double& v = values[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite entry at index " + std::to_string(i));
    }
    if (v < -kNegativeClamp) {
      throw Error(ErrorCode::kNegativeMass,
                  "negative mass " + std::to_string(v) + " at index " +
                      std::to_string(i));
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kNotNormalized,
                "entries sum to " + std::to_string(sum));
  }
  for (double& v : values) v /= sum;
  return SimplexVector(std::move(values));
}

SimplexVector SimplexVector::FromTrusted(std::vector<double> values) {
  return SimplexVector(std::move(values));
}

SimplexVector Uniform(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  return SimplexVector::FromTrusted(
      std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

QueryWorkload QueryWorkload::Create(std::vector<std::vector<double>> rows,
                                    bool symmetric) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "workload needs at least 1 row");
  }
  const std::size_t k = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(i) + " has length " +
                      std::to_string(rows[i].size()) + ", expected " +
                      std::to_string(k));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return FromFlat(k, std::move(flat), symmetric);
}

QueryWorkload QueryWorkload::FromFlat(std::size_t k, std::vector<double> flat,
                                      bool symmetric) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (flat.empty() || flat.size() % k != 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "workload data is not a nonempty multiple of k");
  }
  const std::size_t m = flat.size() / k;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t z = 0; z < k; ++z) {
      const double v = flat[i * k + z];
      if (!(v >= -1.0 && v <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "entry " + std::to_string(v) + " at row " +
                        std::to_string(i) + ", column " + std::to_string(z) +
                        " is outside [-1, 1]");
      }
    }
  }
  QueryWorkload w(k, m, std::move(flat), symmetric);
  if (symmetric && !IsClosedUnderNegation(w)) {
    throw Error(ErrorCode::kInvalidArgument,
                "workload flagged symmetric is not closed under negation");
  }
  return w;
}

namespace {

std::vector<double> Negated(std::span<const double> row) {
  std::vector<double> out(row.size());
  // Adding +0.0 maps -0.0 to +0.0 so negated zeros serialize as "0".
  for (std::size_t z = 0; z < row.size(); ++z) out[z] = -row[z] + 0.0;
  return out;
}

}  // namespace

bool IsClosedUnderNegation(const QueryWorkload& w) {
  std::set<std::vector<double>> rows;
  for (std::size_t i = 0; i < w.m(); ++i) {
    rows.emplace(w.row(i).begin(), w.row(i).end());
  }
  for (std::size_t i = 0; i < w.m(); ++i) {
    if (!rows.contains(Negated(w.row(i)))) return false;
  }
  return true;
}

QueryWorkload Symmetrize(const QueryWorkload& w) {
  std::set<std::vector<double>> seen;
  std::vector<double> flat;
  auto add = [&](std::vector<double> row) {
    if (seen.insert(row).second) flat.insert(flat.end(), row.begin(), row.end());
  };
  for (std::size_t i = 0; i < w.m(); ++i) {
    add(std::vector<double>(w.row(i).begin(), w.row(i).end()));
    add(Negated(w.row(i)));
  }
  return QueryWorkload::FromFlat(w.k(), std::move(flat), /*symmetric=*/true);
}

Diameters ComputeDiameters(const QueryWorkload& w) {
  if (w.m() * w.m() * w.k() >= (1u << 16)) {
    return kernels::omp::PairwiseDiameters(w);
  }
  return kernels::serial::PairwiseDiameters(w);
}

Dataset Dataset::Create(std::vector<std::uint32_t> points, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset must be nonempty");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= k) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "point " + std::to_string(i) + " has index " +
                      std::to_string(points[i]) + " >= k=" + std::to_string(k));
    }
  }
  return Dataset(std::move(points), k);
}

SimplexVector Empirical(const Dataset& data, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::vector<std::size_t> counts(k, 0);
  for (std::uint32_t z : data.points()) {
    if (z >= k) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(z) + " >= k=" + std::to_string(k));
    }
    ++counts[z];
  }
  std::vector<double> values(k);
  const double n = static_cast<double>(data.n());
  for (std::size_t z = 0; z < k; ++z) {
    values[z] = static_cast<double>(counts[z]) / n;
  }
  return SimplexVector::Create(std::move(values));
}

PrivacyBudget PrivacyBudget::Create(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  return {epsilon, delta};
}

void DualPoint::Validate(const QueryWorkload& w) const {
  if (vector.size() != w.k()) {
    throw Error(ErrorCode::kDimensionMismatch, "dual point has wrong length");
  }
  if (!weights) return;
  if (weights->size() != w.m()) {
    throw Error(ErrorCode::kDimensionMismatch, "weights have wrong length");
  }
  double sum = 0.0;
  for (double v : *weights) {
    if (v < 0.0) throw Error(ErrorCode::kNegativeMass, "negative weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kNotNormalized, "weights do not sum to one");
  }
  for (std::size_t z = 0; z < w.k(); ++z) {
    double combo = 0.0;
    for (std::size_t i = 0; i < w.m(); ++i) combo += (*weights)[i] * w.at(i, z);
    if (std::abs(combo - vector[z]) > kSimplexTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weights do not reproduce coordinate " + std::to_string(z));
    }
  }
}

RegParam RegParam::Create(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidAlpha, "alpha must be >= 0");
  }
  return {alpha};
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace dpqr
