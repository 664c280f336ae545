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
#include "privgame/cost_model.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "privgame/status.h"

namespace privgame {

double ExtendedReal::value() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

ExtendedReal ExtendedReal::operator+(const ExtendedReal& other) const {
  if (infinite_ || other.infinite_) return Infinite();
  return ExtendedReal(value_ + other.value_);
}

std::partial_ordering ExtendedReal::operator<=>(
    const ExtendedReal& other) const {
  if (infinite_ && other.infinite_) return std::partial_ordering::equivalent;
  if (infinite_) return std::partial_ordering::greater;
  if (other.infinite_) return std::partial_ordering::less;
  return value_ <=> other.value_;
}

bool ExtendedReal::operator==(const ExtendedReal& other) const {
  return (*this <=> other) == std::partial_ordering::equivalent;
}

absl::StatusOr<PrivacyCost> PrivacyCost::Monomial(double c, double k) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    return absl::InvalidArgumentError(
        absl::StrCat("monomial coefficient must be positive, got ", c));
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    return absl::InvalidArgumentError(
        absl::StrCat("monomial exponent must be positive, got ", k));
  }
  PrivacyCost cost;
  cost.kind_ = Kind::kMonomial;
  cost.c_ = c;
  cost.k_ = k;
  return cost;
}

absl::StatusOr<PrivacyCost> PrivacyCost::Generic(Fn value, Fn derivative,
                                                 Fn second_derivative) {
  if (!value || !derivative || !second_derivative) {
    return absl::InvalidArgumentError(
        "generic privacy cost needs value, first and second derivative");
  }
  PrivacyCost cost;
  cost.kind_ = Kind::kGeneric;
  cost.value_ = std::move(value);
  cost.derivative_ = std::move(derivative);
  cost.second_derivative_ = std::move(second_derivative);
  return cost;
}

double PrivacyCost::Value(double lambda) const {
  if (kind_ == Kind::kGeneric) return value_(lambda);
  return c_ * std::pow(lambda, k_);
}

double PrivacyCost::Derivative(double lambda) const {
  if (kind_ == Kind::kGeneric) return derivative_(lambda);
  return c_ * k_ * std::pow(lambda, k_ - 1.0);
}

double PrivacyCost::SecondDerivative(double lambda) const {
  if (kind_ == Kind::kGeneric) return second_derivative_(lambda);
  return c_ * k_ * (k_ - 1.0) * std::pow(lambda, k_ - 2.0);
}

EstimationCost EstimationCost::Linear() { return EstimationCost(); }

absl::StatusOr<EstimationCost> EstimationCost::Generic(Fn value,
                                                       Fn derivative) {
  if (!value || !derivative) {
    return absl::InvalidArgumentError(
        "generic estimation cost needs value and derivative");
  }
  EstimationCost cost;
  cost.kind_ = Kind::kGeneric;
  cost.value_ = std::move(value);
  cost.derivative_ = std::move(derivative);
  return cost;
}

double EstimationCost::Value(double variance) const {
  if (kind_ == Kind::kLinear) return variance;
  return value_(variance);
}

double EstimationCost::Derivative(double variance) const {
  if (kind_ == Kind::kLinear) return 1.0;
  return derivative_(variance);
}

ExtendedReal EstimationCost::Value(const ExtendedReal& variance) const {
  if (variance.is_infinite()) return ExtendedReal::Infinite();
  return ExtendedReal(Value(variance.value()));
}

absl::StatusOr<CostAndSlope> EvaluatePrivacyCost(const PrivacyCost& cost,
                                                 double sigma2, double lambda) {
  if (!(sigma2 > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be positive, got ", sigma2));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0 / sigma2)) {
    return DomainError(absl::StrCat("precision ", lambda,
                                    " outside [0, ", 1.0 / sigma2, "]"));
  }
  return CostAndSlope{cost.Value(lambda), cost.Derivative(lambda)};
}

absl::StatusOr<ExtendedReal> EvaluateEstimationCost(const EstimationCost& cost,
                                                    const ExtendedReal& variance,
                                                    double min_variance) {
  if (variance.is_finite() && !(variance.value() >= min_variance)) {
    return DomainError(absl::StrCat("variance ", variance.value(),
                                    " below the floor ", min_variance));
  }
  return cost.Value(variance);
}

bool ValidationReport::ok() const {
  for (const auto& check : checks) {
    if (!check.passed) return false;
  }
  return true;
}

std::string ValidationReport::Summary() const {
  std::string out;
  for (const auto& check : checks) {
    absl::StrAppend(&out, check.name, ": ", check.passed ? "pass" : "FAIL");
    if (check.violation.has_value()) {
      absl::StrAppend(&out, " (at ", *check.violation, ")");
    }
    absl::StrAppend(&out, "\n");
  }
  return out;
}

namespace {

constexpr double kZeroTolerance = 1e-12;

// Records the first failing sample; later samples do not overwrite it.
void Expect(AssumptionCheck& check, bool holds, double at) {
  if (!holds && check.passed) {
    check.passed = false;
    check.violation = at;
  }
}

}  // namespace

absl::StatusOr<ValidationReport> ValidateAssumptions(
    const PrivacyCost& privacy, const EstimationCost& estimation, double sigma2,
    int samples) {
  if (!(sigma2 > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be positive, got ", sigma2));
  }
  if (samples < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 samples, got ", samples));
  }

  AssumptionCheck zero_value{"privacy cost c(0) = 0", true, std::nullopt};
  AssumptionCheck zero_slope{"privacy cost c'(0) = 0", true, std::nullopt};
  AssumptionCheck monotone{"privacy cost non-decreasing", true, std::nullopt};
  AssumptionCheck convex{"privacy cost strictly convex", true, std::nullopt};
  Expect(zero_value, std::abs(privacy.Value(0.0)) <= kZeroTolerance, 0.0);
  Expect(zero_slope, std::abs(privacy.Derivative(0.0)) <= kZeroTolerance, 0.0);

  const double cap = 1.0 / sigma2;
  for (int i = 1; i <= samples; ++i) {
    const double lambda = cap * i / samples;
    Expect(monotone, privacy.Derivative(lambda) >= 0.0, lambda);
    Expect(convex, privacy.SecondDerivative(lambda) > 0.0, lambda);
  }

  AssumptionCheck estimation_nonneg{"estimation cost non-negative", true, std::nullopt};
  AssumptionCheck estimation_slope{"estimation cost increasing", true, std::nullopt};
  AssumptionCheck estimation_convex{"estimation cost convex", true, std::nullopt};
  // The domain is [sigma2/n, inf) and n is not known here; cover twelve
  // decades around sigma2.
  const double lo = std::log(sigma2 * 1e-6);
  const double hi = std::log(sigma2 * 1e6);
  double previous_slope = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double v = std::exp(lo + (hi - lo) * i / (samples - 1));
    const double slope = estimation.Derivative(v);
    Expect(estimation_nonneg, estimation.Value(v) >= 0.0, v);
    Expect(estimation_slope, slope > 0.0, v);
    Expect(estimation_convex,
           slope >= previous_slope - 1e-12 * std::abs(previous_slope), v);
    previous_slope = slope;
  }

  ValidationReport report;
  report.checks = {zero_value,        zero_slope,       monotone,
                   convex,            estimation_nonneg, estimation_slope,
                   estimation_convex};
  return report;
}

}  // namespace privgame
