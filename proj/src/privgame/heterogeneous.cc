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
#include "privgame/heterogeneous.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privgame/status.h"

namespace privgame {
namespace {

constexpr double kChangeTolerance = 1e-12;
constexpr int kMaxSweeps = 1'000'000;
constexpr double kIndifferenceTolerance = 1e-12;

absl::Status CheckBasics(const HeterogeneousGameSpec& spec) {
  if (spec.costs.empty()) return absl::InvalidArgumentError("no agents");
  if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be positive, got ", spec.sigma2));
  }
  if (!spec.solicited.empty() && spec.solicited.size() != spec.costs.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("solicited mask has ", spec.solicited.size(),
                     " entries for ", spec.costs.size(), " agents"));
  }
  if (spec.solicited_count() == 0) {
    return absl::InvalidArgumentError("no agent is solicited");
  }
  if (spec.eta.has_value() && !(*spec.eta >= 0.0 && *spec.eta <= spec.cap())) {
    return DomainError(absl::StrCat("minimum precision ", *spec.eta,
                                    " outside [0, ", spec.cap(), "]"));
  }
  return absl::OkStatus();
}

// argmin over x in [lo, hi] of c(x) + F(1 / (rest + x)). The objective is
// convex in x, so bisect on the sign of its derivative.
double MinimizeCoordinate(const PrivacyCost& cost,
                          const EstimationCost& estimation, double rest,
                          double lo, double hi) {
  auto slope = [&](double x) {
    const double total = rest + x;
    if (total <= 0.0) return -std::numeric_limits<double>::infinity();
    return cost.Derivative(x) -
           estimation.Derivative(1.0 / total) / (total * total);
  };
  if (slope(hi) <= 0.0) return hi;
  if (rest + lo > 0.0 && slope(lo) >= 0.0) return lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct BoxMinimum {
  std::vector<double> lambda;
  CoordinateDescentDiagnostics diagnostics;
};

// Cyclic coordinate descent on Phi over [floor, cap]^s for the solicited
// agents, with exact one-dimensional minimisation per coordinate.
absl::StatusOr<BoxMinimum> MinimizePotential(
    const HeterogeneousGameSpec& spec, double floor,
    std::span<const double> start = {}) {
  const double cap = spec.cap();
  const std::size_t n = spec.size();
  BoxMinimum out;
  out.lambda.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!spec.is_solicited(i)) continue;
    out.lambda[i] = start.empty() ? std::max(floor, 0.5 * cap)
                                  : std::clamp(start[i], floor, cap);
  }

  auto& diag = out.diagnostics;
  for (diag.sweeps = 1; diag.sweeps <= kMaxSweeps; ++diag.sweeps) {
    double total = 0.0;
    for (double l : out.lambda) total += l;
    diag.max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!spec.is_solicited(i)) continue;
      const double rest = std::max(0.0, total - out.lambda[i]);
      const double next =
          MinimizeCoordinate(spec.costs[i], spec.estimation, rest, floor, cap);
      diag.max_change = std::max(diag.max_change, std::abs(next - out.lambda[i]));
      total = rest + next;
      out.lambda[i] = next;
    }
    if (diag.max_change < kChangeTolerance) break;
  }
  if (diag.sweeps > kMaxSweeps) {
    return NotConvergedError(absl::StrCat(
        "coordinate descent did not converge; last change ", diag.max_change));
  }

  double total = 0.0;
  for (double l : out.lambda) total += l;
  const double marginal =
      spec.estimation.Derivative(1.0 / total) / (total * total);
  diag.kkt_residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!spec.is_solicited(i)) continue;
    const double l = out.lambda[i];
    if (l <= floor || l >= cap) continue;
    diag.kkt_residual =
        std::max(diag.kkt_residual,
                 std::abs(spec.costs[i].Derivative(l) - marginal) /
                     std::max(1.0, marginal));
  }
  return out;
}

// Cost of staying minus cost of withholding for agent i; positive means
// withholding is strictly cheaper.
double WithdrawalGain(const HeterogeneousGameSpec& spec,
                      std::span<const double> lambda, double total,
                      std::size_t i) {
  const double rest = total - lambda[i];
  const ExtendedReal stay =
      ExtendedReal(spec.costs[i].Value(lambda[i])) +
      spec.estimation.Value(ExtendedReal(1.0 / total));
  const ExtendedReal leave = rest > 0.0
                                 ? spec.estimation.Value(ExtendedReal(1.0 / rest))
                                 : ExtendedReal::Infinite();
  if (leave.is_infinite()) return -std::numeric_limits<double>::infinity();
  return stay.value() - leave.value();
}

HeterogeneousEquilibrium Assemble(const HeterogeneousGameSpec& spec,
                                  BoxMinimum minimum) {
  HeterogeneousEquilibrium eq;
  eq.lambda = std::move(minimum.lambda);
  eq.diagnostics = minimum.diagnostics;
  double total = 0.0;
  for (double l : eq.lambda) total += l;
  eq.variance = ExtendedReal(1.0 / total);
  eq.potential = *Potential(spec, eq.lambda);
  eq.participation.assign(spec.size(), false);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!spec.is_solicited(i)) continue;
    const double leave_cost =
        total - eq.lambda[i] > 0.0
            ? spec.estimation.Value(1.0 / (total - eq.lambda[i]))
            : 1.0;
    const bool stays = WithdrawalGain(spec, eq.lambda, total, i) <=
                       kIndifferenceTolerance * std::max(1.0, std::abs(leave_cost));
    eq.participation[i] = stays;
    if (!stays) eq.full_participation = false;
  }
  eq.ordering_ok = CheckCostOrdering(spec).ordered;
  return eq;
}

}  // namespace

std::size_t HeterogeneousGameSpec::solicited_count() const {
  if (solicited.empty()) return costs.size();
  return static_cast<std::size_t>(
      std::count(solicited.begin(), solicited.end(), true));
}

absl::Status ValidateSpec(const HeterogeneousGameSpec& spec) {
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    auto report =
        ValidateAssumptions(spec.costs[i], spec.estimation, spec.sigma2);
    if (!report.ok()) return report.status();
    if (!report->ok()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "cost assumptions violated for agent ", i, ":\n", report->Summary()));
    }
  }
  return absl::OkStatus();
}

OrderingReport CheckCostOrdering(const HeterogeneousGameSpec& spec,
                                 int samples) {
  OrderingReport report;
  const double cap = spec.cap();
  for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
    for (int j = 1; j <= samples; ++j) {
      const double lambda = cap * j / samples;
      const double a = spec.costs[i].Derivative(lambda);
      const double b = spec.costs[i + 1].Derivative(lambda);
      if (a > b + 1e-12 * std::max(1.0, std::abs(b))) {
        report.ordered = false;
        report.agent = i;
        report.at = lambda;
        return report;
      }
    }
  }
  return report;
}

absl::StatusOr<ExtendedReal> Potential(const HeterogeneousGameSpec& spec,
                                       std::span<const double> lambda) {
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  if (lambda.size() != spec.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile has ", lambda.size(), " entries for ", spec.size(), " agents"));
  }
  double privacy = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0 && lambda[i] <= spec.cap())) {
      return DomainError(absl::StrCat("precision of agent ", i, " is ",
                                      lambda[i], ", outside [0, ", spec.cap(),
                                      "]"));
    }
    privacy += spec.costs[i].Value(lambda[i]);
    total += lambda[i];
  }
  if (total == 0.0) return ExtendedReal::Infinite();
  return ExtendedReal(privacy + spec.estimation.Value(1.0 / total));
}

absl::StatusOr<HeterogeneousEquilibrium> SolveUnrestricted(
    const HeterogeneousGameSpec& spec) {
  if (spec.eta.has_value()) {
    return absl::InvalidArgumentError(
        "unrestricted game takes no minimum precision; use SolveRestricted");
  }
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  auto minimum = MinimizePotential(spec, 0.0);
  if (!minimum.ok()) return minimum.status();
  return Assemble(spec, *std::move(minimum));
}

absl::StatusOr<HeterogeneousEquilibrium> SolveRestricted(
    const HeterogeneousGameSpec& spec) {
  if (!spec.eta.has_value()) {
    return absl::InvalidArgumentError("restricted game needs a minimum precision");
  }
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  auto minimum = MinimizePotential(spec, *spec.eta);
  if (!minimum.ok()) return minimum.status();
  return Assemble(spec, *std::move(minimum));
}

absl::StatusOr<HeterogeneousMinimumPrecision> OptimalMinimumPrecision(
    const HeterogeneousGameSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  if (spec.solicited_count() < 2) {
    return absl::InvalidArgumentError("eta* needs at least 2 solicited agents");
  }
  const double cap = spec.cap();
  auto free = MinimizePotential(spec, 0.0);
  if (!free.ok()) return free.status();

  double lowest = cap;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.is_solicited(i)) lowest = std::min(lowest, free->lambda[i]);
  }
  HeterogeneousMinimumPrecision out;
  if (lowest >= cap) {
    out.eta_star = cap;
    out.at_cap = true;
    return out;
  }

  // Smallest margin by which any solicited agent prefers staying over
  // withholding; its sign flips once as the floor rises.
  std::vector<double> warm = free->lambda;
  auto margin = [&](double eta) -> absl::StatusOr<double> {
    auto box = MinimizePotential(spec, eta, warm);
    if (!box.ok()) return box.status();
    warm = box->lambda;
    double total = 0.0;
    for (double l : box->lambda) total += l;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (!spec.is_solicited(i)) continue;
      worst = std::min(worst, -WithdrawalGain(spec, box->lambda, total, i));
    }
    return worst;
  };

  auto at_cap = margin(cap);
  if (!at_cap.ok()) return at_cap.status();
  if (*at_cap >= 0.0) {
    out.eta_star = cap;
    out.at_cap = true;
    out.residual = *at_cap;
    return out;
  }

  double lo = lowest;
  double hi = cap;
  const double width = 1e-13 * std::max(1.0, cap);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    auto m = margin(mid);
    if (!m.ok()) return m.status();
    ++out.iterations;
    if (*m >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // The lower end keeps every agent willing to participate.
  out.eta_star = lo;
  auto final_margin = margin(lo);
  if (!final_margin.ok()) return final_margin.status();
  out.residual = *final_margin;
  return out;
}

absl::StatusOr<double> ClosedFormHeterogeneousEtaStar(
    std::span<const double> coefficients, double k, double sigma2) {
  if (coefficients.size() < 2) {
    return absl::InvalidArgumentError("closed form needs at least 2 agents");
  }
  if (!(sigma2 > 0.0)) return absl::InvalidArgumentError("sigma2 must be positive");
  if (!(k >= 2.0)) return absl::InvalidArgumentError("k must be at least 2");
  const auto [lo, hi] =
      std::minmax_element(coefficients.begin(), coefficients.end());
  if (!(*lo > 0.0)) {
    return absl::InvalidArgumentError("coefficients must be positive");
  }
  if (!(k > *hi / *lo)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "closed form needs k > c_n / c_1 = ", *hi / *lo,
        "; use OptimalMinimumPrecision for dispersed costs"));
  }
  const double n = static_cast<double>(coefficients.size());
  return std::min(std::pow(1.0 / (*hi * n * (n - 1.0)), 1.0 / (k + 1.0)),
                  1.0 / sigma2);
}

absl::StatusOr<AgentEntryEffect> AddAgentEffect(
    const HeterogeneousGameSpec& spec, const PrivacyCost& new_cost) {
  HeterogeneousGameSpec before = spec;
  before.eta.reset();
  auto old_eq = SolveUnrestricted(before);
  if (!old_eq.ok()) return old_eq.status();

  HeterogeneousGameSpec after = before;
  after.costs.push_back(new_cost);
  if (!after.solicited.empty()) after.solicited.push_back(true);
  auto new_eq = SolveUnrestricted(after);
  if (!new_eq.ok()) return new_eq.status();

  AgentEntryEffect effect;
  effect.before = old_eq->lambda;
  effect.after = new_eq->lambda;
  effect.variance_before = old_eq->variance;
  effect.variance_after = new_eq->variance;
  // Slack for the solver tolerance.
  constexpr double kSlack = 1e-10;
  for (std::size_t i = 0; i < effect.before.size(); ++i) {
    if (effect.after[i] > effect.before[i] + kSlack) {
      effect.incumbents_weakly_decrease = false;
    }
  }
  effect.variance_weakly_decreases =
      effect.variance_after.value() <= effect.variance_before.value() + kSlack;
  return effect;
}

}  // namespace privgame
