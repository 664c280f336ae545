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
#ifndef PRIVGAME_ESTIMATOR_H_
#define PRIVGAME_ESTIMATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "privgame/cost_model.h"

namespace privgame {

// Per-agent precisions lambda_i = 1 / (sigma2 + added noise variance), each in
// [0, 1/sigma2].
class PrecisionProfile {
 public:
  static absl::StatusOr<PrecisionProfile> Create(std::vector<double> lambda,
                                                 double sigma2);

  std::span<const double> lambda() const { return lambda_; }
  double operator[](std::size_t i) const { return lambda_[i]; }
  std::size_t size() const { return lambda_.size(); }
  double sigma2() const { return sigma2_; }
  double cap() const { return 1.0 / sigma2_; }
  double total() const;

  // Variance of the noise agent i adds on top of the inherent noise; +inf for
  // an agent at precision 0.
  double added_noise_variance(std::size_t i) const;

 private:
  PrecisionProfile(std::vector<double> lambda, double sigma2)
      : lambda_(std::move(lambda)), sigma2_(sigma2) {}

  std::vector<double> lambda_;
  double sigma2_;
};

enum class NoiseDistribution { kGaussian, kCenteredUniform };

struct PopulationModel {
  double true_mean = 0.0;
  double sigma2 = 1.0;
  NoiseDistribution noise = NoiseDistribution::kGaussian;
};

struct PerturbedSampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

// Precision-weighted mean sum(lambda_i y_i) / sum(lambda_i). Fails with an
// estimation-impossible error on the all-zero profile.
absl::StatusOr<double> GlsMean(const PrecisionProfile& profile,
                               std::span<const double> values);

// 1 / sum(lambda_i), or the +inf sentinel when every agent withholds.
ExtendedReal EstimatorVariance(std::span<const double> lambda);
inline ExtendedReal EstimatorVariance(const PrecisionProfile& profile) {
  return EstimatorVariance(profile.lambda());
}

// J_i = c_i(lambda_i) + F(variance).
absl::StatusOr<ExtendedReal> AgentCost(std::size_t agent,
                                       const PrecisionProfile& profile,
                                       const PrivacyCost& privacy,
                                       const EstimationCost& estimation);

// Draws one perturbed data set y~_i = y_M + eps_i + z_i.
absl::StatusOr<PerturbedSampleSet> DrawSamples(const PopulationModel& model,
                                               const PrecisionProfile& profile,
                                               std::uint64_t seed,
                                               std::uint64_t stream = 0);

struct MonteCarloReport {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double empirical_bias = 0.0;
  double empirical_variance = 0.0;
  double theoretical_variance = 0.0;
  // Standard error of the bias estimate, sqrt(empirical_variance / trials).
  double bias_standard_error = 0.0;
  // Large-sample standard error of the variance estimate.
  double variance_standard_error = 0.0;
};

// Repeats DrawSamples + GlsMean. Trial t draws from the substream (seed, t), so
// results do not depend on the worker count.
absl::StatusOr<MonteCarloReport> SimulateEstimation(
    const PopulationModel& model, const PrecisionProfile& profile,
    std::int64_t trials, std::uint64_t seed);

}  // namespace privgame

#endif  // PRIVGAME_ESTIMATOR_H_
