// Copyright 2026 The privgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "privgame/estimator.h"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privgame/parallel.h"
#include "privgame/status.h"

namespace privgame {

absl::StatusOr<PrecisionProfile> PrecisionProfile::Create(
    std::vector<double> lambda, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be positive and finite, got ", sigma2));
  }
  if (lambda.empty()) {
    return absl::InvalidArgumentError("precision profile is empty");
  }
  const double cap = 1.0 / sigma2;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0 && lambda[i] <= cap)) {
      return DomainError(absl::StrCat("precision of agent ", i, " is ",
                                      lambda[i], ", outside [0, ", cap, "]"));
    }
  }
  return PrecisionProfile(std::move(lambda), sigma2);
}

double PrecisionProfile::total() const {
  double sum = 0.0;
  for (double l : lambda_) sum += l;
  return sum;
}

double PrecisionProfile::added_noise_variance(std::size_t i) const {
  if (lambda_[i] == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, 1.0 / lambda_[i] - sigma2_);
}

absl::StatusOr<double> GlsMean(const PrecisionProfile& profile,
                               std::span<const double> values) {
  if (values.size() != profile.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("got ", values.size(), " values for ", profile.size(),
                     " precisions"));
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (profile[i] == 0.0) continue;
    weighted += profile[i] * values[i];
    total += profile[i];
  }
  if (total == 0.0) {
    return EstimationImpossibleError(
        "every agent withholds her data; the mean cannot be estimated");
  }
  return weighted / total;
}

ExtendedReal EstimatorVariance(std::span<const double> lambda) {
  double total = 0.0;
  for (double l : lambda) total += l;
  if (total == 0.0) return ExtendedReal::Infinite();
  return ExtendedReal(1.0 / total);
}

absl::StatusOr<ExtendedReal> AgentCost(std::size_t agent,
                                       const PrecisionProfile& profile,
                                       const PrivacyCost& privacy,
                                       const EstimationCost& estimation) {
  if (agent >= profile.size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "agent index ", agent, " out of range for ", profile.size(), " agents"));
  }
  auto own = EvaluatePrivacyCost(privacy, profile.sigma2(), profile[agent]);
  if (!own.ok()) return own.status();
  auto shared =
      EvaluateEstimationCost(estimation, EstimatorVariance(profile),
                             profile.sigma2() / profile.size());
  if (!shared.ok()) return shared.status();
  return ExtendedReal(own->value) + *shared;
}

namespace {

std::mt19937_64 SubstreamEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Zero-mean draw with the requested variance.
double DrawNoise(std::mt19937_64& engine, NoiseDistribution distribution,
                 double variance) {
  if (variance == 0.0) return 0.0;
  const double sd = std::sqrt(variance);
  if (distribution == NoiseDistribution::kCenteredUniform) {
    // U(-a, a) has variance a^2 / 3.
    const double a = std::sqrt(3.0) * sd;
    return std::uniform_real_distribution<double>(-a, a)(engine);
  }
  return std::normal_distribution<double>(0.0, sd)(engine);
}

void FillSamples(const PopulationModel& model, const PrecisionProfile& profile,
                 std::mt19937_64& engine, std::vector<double>& out) {
  out.assign(profile.size(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == 0.0) continue;  // weight zero; value never read
    const double inherent = DrawNoise(engine, model.noise, model.sigma2);
    const double added =
        DrawNoise(engine, model.noise, profile.added_noise_variance(i));
    out[i] = model.true_mean + inherent + added;
  }
}

absl::Status CheckModel(const PopulationModel& model,
                        const PrecisionProfile& profile) {
  if (!(model.sigma2 > 0.0)) {
    return absl::InvalidArgumentError("population sigma2 must be positive");
  }
  if (std::abs(model.sigma2 - profile.sigma2()) >
      1e-12 * std::max(1.0, model.sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("population sigma2 ", model.sigma2,
                     " differs from the profile's ", profile.sigma2()));
  }
  if (profile.total() == 0.0) {
    return EstimationImpossibleError(
        "every agent withholds her data; nothing to simulate");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PerturbedSampleSet> DrawSamples(const PopulationModel& model,
                                               const PrecisionProfile& profile,
                                               std::uint64_t seed,
                                               std::uint64_t stream) {
  if (absl::Status s = CheckModel(model, profile); !s.ok()) return s;
  auto engine = SubstreamEngine(seed, stream);
  PerturbedSampleSet set;
  set.seed = seed;
  FillSamples(model, profile, engine, set.values);
  return set;
}

absl::StatusOr<MonteCarloReport> SimulateEstimation(
    const PopulationModel& model, const PrecisionProfile& profile,
    std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least one trial, got ", trials));
  }
  if (absl::Status s = CheckModel(model, profile); !s.ok()) return s;

  std::vector<double> estimates(static_cast<std::size_t>(trials));
  const std::size_t chunk = 1024;
  const std::size_t chunks = (estimates.size() + chunk - 1) / chunk;
  ParallelFor(chunks, [&](std::size_t c) {
    std::vector<double> values;
    const std::size_t end = std::min(estimates.size(), (c + 1) * chunk);
    for (std::size_t t = c * chunk; t < end; ++t) {
      auto engine = SubstreamEngine(seed, t);
      FillSamples(model, profile, engine, values);
      // Profile total is positive, so the mean exists.
      estimates[t] = *GlsMean(profile, values);
    }
  });

  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(trials);
  double squares = 0.0;
  for (double e : estimates) squares += (e - mean) * (e - mean);
  const double variance =
      trials > 1 ? squares / static_cast<double>(trials - 1) : 0.0;

  MonteCarloReport report;
  report.trials = trials;
  report.seed = seed;
  report.empirical_bias = mean - model.true_mean;
  report.empirical_variance = variance;
  report.theoretical_variance = 1.0 / profile.total();
  report.bias_standard_error = std::sqrt(variance / static_cast<double>(trials));
  report.variance_standard_error =
      trials > 1 ? variance * std::sqrt(2.0 / static_cast<double>(trials - 1))
                 : 0.0;
  return report;
}

}  // namespace privgame
