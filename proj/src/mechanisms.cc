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

#include "dpqr/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dpqr {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t SplitMix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t FloorAtOne(double raw, std::int64_t cap, bool& capped) {
  if (!std::isfinite(raw) || raw <= 0.0) {
    throw Error(ErrorCode::kDegenerateSchedule,
                "iteration count formula evaluated to " + std::to_string(raw));
  }
  const double floored = std::floor(raw);
  capped = floored > static_cast<double>(cap);
  if (capped) return cap;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(floored));
}

}  // namespace

std::uint64_t HashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t MixHash(std::uint64_t a, std::uint64_t b) {
  return SplitMix(a ^ SplitMix(b + kGolden));
}

NoiseStream::NoiseStream(std::uint64_t seed, std::string label)
    : seed_(seed),
      label_(std::move(label)),
      key_(MixHash(seed, HashLabel(label_))) {}

NoiseStream::NoiseStream(std::uint64_t seed, std::string label,
                         std::uint64_t key)
    : seed_(seed), label_(std::move(label)), key_(key) {}

NoiseStream NoiseStream::Derive(std::string_view sublabel,
                                std::uint64_t index) const {
  std::string label = label_;
  label += '/';
  label += sublabel;
  const std::uint64_t key = MixHash(MixHash(key_, HashLabel(sublabel)), index);
  return NoiseStream(seed_, std::move(label), key);
}

std::uint64_t NoiseStream::NextU64() {
  ++counter_;
  return SplitMix(key_ + counter_ * kGolden);
}

double NoiseStream::NextUniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

double NoiseStream::NextNormal() {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  const double u1 = NextUniform();
  const double u2 = NextUniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double SampleLaplace(double scale, NoiseStream& rng) {
  if (scale < 0.0) throw Error(ErrorCode::kInvalidArgument, "scale < 0");
  if (scale == 0.0) return 0.0;
  const double u = rng.NextUniform() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

std::vector<double> SampleGaussianVec(std::size_t k, double sigma,
                                      NoiseStream& rng) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma <= 0");
  std::vector<double> out(k);
  for (double& v : out) v = sigma * rng.NextNormal();
  return out;
}

std::size_t ReportNoisyMax(std::span<const double> scores, double scale,
                           NoiseStream& rng) {
  if (scores.empty()) throw Error(ErrorCode::kInvalidArgument, "no scores");
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double noisy = scores[i] + SampleLaplace(scale, rng);
    if (noisy > best_value) {
      best_value = noisy;
      best = i;
    }
  }
  return best;
}

FWSchedule MakeFWSchedule(const PrivacyBudget& budget, RegParam alpha,
                          double d1, double dinf, std::size_t num_queries,
                          std::size_t n, const FWScheduleOptions& options) {
  if (!(alpha.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "DPFW requires alpha > 0");
  }
  if (!(d1 > 0.0) || !(dinf > 0.0)) {
    throw Error(ErrorCode::kDegenerateSchedule,
                "workload diameters must be positive");
  }
  if (num_queries == 0 || n == 0) {
    throw Error(ErrorCode::kInvalidParams, "need |Q| >= 1 and n >= 1");
  }
  const double log_inv_delta = std::log(1.0 / budget.delta);
  const double en = budget.epsilon * static_cast<double>(n);
  const double t_diam = options.t_diameter == TDiameter::kD1 ? d1 : dinf;
  const double raw_t =
      std::pow(t_diam, 1.5) * en /
      (std::sqrt(32.0 * alpha.alpha * log_inv_delta) *
       std::log(2.0 * static_cast<double>(num_queries)));
  FWSchedule s{};
  s.iterations = FloorAtOne(raw_t, options.max_iterations, s.capped);
  const double t = static_cast<double>(s.iterations);
  s.gamma = std::min(1.0, 2.0 * std::sqrt(alpha.alpha / (t * dinf)));
  s.lambda = 4.0 * d1 * std::sqrt(2.0 * t * log_inv_delta) / en;
  return s;
}

AMSchedule AMScheduleFromParams(std::int64_t iterations, double sigma,
                                double alpha) {
  if (iterations < 1 || !(sigma > 0.0) || !(alpha > 0.0)) {
    throw Error(ErrorCode::kDegenerateSchedule,
                "AM schedule needs T >= 1, sigma > 0, alpha > 0");
  }
  AMSchedule s{};
  s.iterations = iterations;
  s.sigma = sigma;
  s.alpha = alpha;
  s.eta_offset = std::sqrt(4.0 / (alpha * sigma)) + 1.0;
  return s;
}

AMSchedule MakeAMSchedule(const PrivacyBudget& budget, RegParam alpha,
                          double width, std::size_t k, std::size_t n,
                          std::int64_t max_iterations) {
  if (!(alpha.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "DPAM requires alpha > 0");
  }
  if (!(width > 0.0)) {
    throw Error(ErrorCode::kDegenerateSchedule, "Gaussian width must be > 0");
  }
  if (k < 2 || n == 0) {
    throw Error(ErrorCode::kInvalidParams, "need k >= 2 and n >= 1");
  }
  const double log_inv_delta = std::log(1.0 / budget.delta);
  const double en = budget.epsilon * static_cast<double>(n);
  const double raw_t = std::sqrt(std::log(static_cast<double>(k))) /
                       std::sqrt(log_inv_delta) * en / width;
  bool capped = false;
  const std::int64_t t = FloorAtOne(raw_t, max_iterations, capped);
  const double sigma =
      4.0 * std::sqrt(static_cast<double>(t) * log_inv_delta) / en;
  AMSchedule s = AMScheduleFromParams(t, sigma, alpha.alpha);
  s.capped = capped;
  return s;
}

CompositionResult AdvancedComposition(double eps_step, std::int64_t steps,
                                      double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  if (steps <= 0) return {0.0, true};
  const double log_inv_delta = std::log(1.0 / delta);
  const double t = static_cast<double>(steps);
  return {4.0 * eps_step * std::sqrt(2.0 * t * log_inv_delta),
          log_inv_delta >= eps_step * eps_step * t};
}

double RdpToDp(double beta, double eps_rdp, double delta) {
  if (!(beta > 1.0)) {
    throw Error(ErrorCode::kInvalidOrder, "RDP order must exceed 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  return eps_rdp + std::log(1.0 / delta) / (beta - 1.0);
}

double FWStepEpsilon(double d1, std::size_t n, double lambda) {
  return d1 / (static_cast<double>(n) * lambda);
}

double GaussianStepRdp(double beta, double sigma, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double sensitivity_sq = 2.0 / (nd * nd);
  return beta * sensitivity_sq / (2.0 * sigma * sigma);
}

double OptimalRdpOrder(std::int64_t steps, std::size_t n, double sigma,
                       double delta) {
  return 1.0 + std::sqrt(std::log(1.0 / delta) / static_cast<double>(steps)) *
                   static_cast<double>(n) * sigma;
}

double AMPrivacySpent(std::int64_t steps, std::size_t n, double sigma,
                      double delta) {
  const double beta = OptimalRdpOrder(steps, n, sigma, delta);
  const double eps_rdp =
      static_cast<double>(steps) * GaussianStepRdp(beta, sigma, n);
  return RdpToDp(beta, eps_rdp, delta);
}

double TightAMSigma(std::int64_t steps, std::size_t n, double epsilon,
                    double delta) {
  const double t = static_cast<double>(steps);
  const double tl = t * std::log(1.0 / delta);
  return (std::sqrt(tl) + std::sqrt(tl + epsilon * t)) /
         (epsilon * static_cast<double>(n));
}

}  // namespace dpqr
