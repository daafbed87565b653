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

#ifndef DPQR_CORE_H_
#define DPQR_CORE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpqr/error.h"

namespace dpqr {

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kNegativeClamp = 1e-12;

// A probability vector over a finite universe of size k.
class SimplexVector {
 public:
  // Validates and normalizes `values`. Entries in [-1e-12, 0) are clamped to
  // zero; the result is rescaled to sum to exactly one (up to rounding).
  static SimplexVector Create(std::vector<double> values);

  // Skips validation. The caller guarantees nonnegative entries that sum to
  // one within kSimplexTolerance (e.g. a softmax output).
  static SimplexVector FromTrusted(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

 private:
  explicit SimplexVector(std::vector<double> values)
      : values_(std::move(values)) {}
  std::vector<double> values_;
};

SimplexVector Uniform(std::size_t k);

// m queries over a universe of size k, stored row-major. Every entry lies in
// [-1, 1].
class QueryWorkload {
 public:
  static QueryWorkload Create(std::vector<std::vector<double>> rows,
                              bool symmetric = false);
  static QueryWorkload FromFlat(std::size_t k, std::vector<double> flat,
                                bool symmetric = false);

  std::size_t k() const { return k_; }
  std::size_t m() const { return m_; }
  bool symmetric() const { return symmetric_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * k_, k_};
  }
  double at(std::size_t i, std::size_t z) const { return data_[i * k_ + z]; }
  std::span<const double> flat() const { return data_; }

  friend bool operator==(const QueryWorkload&, const QueryWorkload&) = default;

 private:
  QueryWorkload(std::size_t k, std::size_t m, std::vector<double> data,
                bool symmetric)
      : k_(k), m_(m), data_(std::move(data)), symmetric_(symmetric) {}

  std::size_t k_;
  std::size_t m_;
  std::vector<double> data_;
  bool symmetric_;
};

// Closes the workload under negation. Each input row and its negation appear
// exactly once (exact coordinate equality), in first-seen order.
QueryWorkload Symmetrize(const QueryWorkload& w);

// Returns true iff for every row q the row -q is present.
bool IsClosedUnderNegation(const QueryWorkload& w);

struct Diameters {
  double d1 = 0.0;
  double dinf = 0.0;
};

// Max pairwise l1 / l_inf distance over the workload rows. The diameter of
// conv(Q) is attained at vertices, so the rows suffice.
Diameters ComputeDiameters(const QueryWorkload& w);

// n sample indices into a universe of size k.
class Dataset {
 public:
  static Dataset Create(std::vector<std::uint32_t> points, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t n() const { return points_.size(); }
  std::span<const std::uint32_t> points() const { return points_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Dataset(std::vector<std::uint32_t> points, std::size_t k)
      : points_(std::move(points)), k_(k) {}
  std::vector<std::uint32_t> points_;
  std::size_t k_;
};

// Empirical distribution count(z)/n. Throws kIndexOutOfRange if a point is
// not below k.
SimplexVector Empirical(const Dataset& data, std::size_t k);

struct PrivacyBudget {
  double epsilon;
  double delta;

  static PrivacyBudget Create(double epsilon, double delta);
};

// A point of conv(Q), optionally with the convex weights over workload rows
// that produce it.
struct DualPoint {
  std::vector<double> vector;
  std::optional<std::vector<double>> weights;

  // Checks the weight invariants against `w` (nonnegative, sum to one,
  // reproduce `vector` per coordinate within 1e-9).
  void Validate(const QueryWorkload& w) const;
};

struct RegParam {
  double alpha;

  static RegParam Create(double alpha);
};

double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace dpqr

#endif  // DPQR_CORE_H_
