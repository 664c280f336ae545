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
#ifndef PRIVGAME_COST_MODEL_H_
#define PRIVGAME_COST_MODEL_H_

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace privgame {

// A non-negative cost or variance that may be the +infinity sentinel. The
// sentinel compares above every finite value and absorbs addition.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}

  static constexpr ExtendedReal Infinite() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  // Only meaningful for finite values; the sentinel reports +inf.
  double value() const;

  ExtendedReal operator+(const ExtendedReal& other) const;
  std::partial_ordering operator<=>(const ExtendedReal& other) const;
  bool operator==(const ExtendedReal& other) const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Privacy cost c(lambda) of a single agent on [0, 1/sigma2].
class PrivacyCost {
 public:
  enum class Kind { kMonomial, kGeneric };
  using Fn = std::function<double(double)>;

  // c * lambda^k. Requires c > 0 and finite k > 0; whether the instance meets
  // the modelling assumptions (k >= 2 in practice) is a separate question
  // answered by ValidateAssumptions.
  static absl::StatusOr<PrivacyCost> Monomial(double c, double k);
  static absl::StatusOr<PrivacyCost> Generic(Fn value, Fn derivative,
                                             Fn second_derivative);

  Kind kind() const { return kind_; }
  bool is_monomial() const { return kind_ == Kind::kMonomial; }
  // Monomial parameters; zero for generic costs.
  double coefficient() const { return c_; }
  double exponent() const { return k_; }

  // Raw evaluation, no domain check.
  double Value(double lambda) const;
  double Derivative(double lambda) const;
  double SecondDerivative(double lambda) const;

 private:
  PrivacyCost() = default;

  Kind kind_ = Kind::kMonomial;
  double c_ = 0.0;
  double k_ = 0.0;
  Fn value_;
  Fn derivative_;
  Fn second_derivative_;
};

// Estimation cost F applied to the estimator variance. Linear means F(v) = v.
class EstimationCost {
 public:
  enum class Kind { kLinear, kGeneric };
  using Fn = std::function<double(double)>;

  static EstimationCost Linear();
  static absl::StatusOr<EstimationCost> Generic(Fn value, Fn derivative);

  Kind kind() const { return kind_; }
  bool is_linear() const { return kind_ == Kind::kLinear; }

  // Finite variance only.
  double Value(double variance) const;
  double Derivative(double variance) const;

  // Sentinel-aware: +inf variance maps to the +inf sentinel.
  ExtendedReal Value(const ExtendedReal& variance) const;

 private:
  EstimationCost() = default;

  Kind kind_ = Kind::kLinear;
  Fn value_;
  Fn derivative_;
};

struct CostAndSlope {
  double value = 0.0;
  double derivative = 0.0;
};

// Evaluates c(lambda) and c'(lambda), rejecting lambda outside [0, 1/sigma2].
absl::StatusOr<CostAndSlope> EvaluatePrivacyCost(const PrivacyCost& cost,
                                                 double sigma2, double lambda);

// Evaluates F(variance). Variances below min_variance (sigma2 / n) are outside
// the domain and rejected.
absl::StatusOr<ExtendedReal> EvaluateEstimationCost(const EstimationCost& cost,
                                                    const ExtendedReal& variance,
                                                    double min_variance);

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  // First sample point at which the check failed.
  std::optional<double> violation;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  std::string Summary() const;
};

inline constexpr int kDefaultValidationSamples = 1000;

// Sampled check of the privacy-cost assumption (zero value and slope at 0,
// non-decreasing, strictly convex on (0, 1/sigma2]) and the estimation-cost
// assumption (positive slope, convex). Failures are reported, never thrown.
absl::StatusOr<ValidationReport> ValidateAssumptions(
    const PrivacyCost& privacy, const EstimationCost& estimation, double sigma2,
    int samples = kDefaultValidationSamples);

}  // namespace privgame

#endif  // PRIVGAME_COST_MODEL_H_
