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
#include "privgame/extensions.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "privgame/parallel.h"
#include "privgame/status.h"

namespace privgame {
namespace {

constexpr double kTieTolerance = 1e-12;

bool WeaklyBelow(const ExtendedReal& a, const ExtendedReal& b) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  return a.value() <= b.value() + kTieTolerance * std::max(1.0, std::abs(b.value()));
}

absl::Status CheckTwoStageSpec(const HomogeneousGameSpec& spec, double eta) {
  if (!spec.is_monomial_linear()) {
    return absl::FailedPreconditionError(
        "two-stage game needs a monomial privacy cost and linear estimation "
        "cost");
  }
  if (spec.n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", spec.n));
  }
  if (!(spec.sigma2 > 0.0)) {
    return absl::InvalidArgumentError("sigma2 must be positive");
  }
  if (!(eta >= 0.0 && eta <= spec.cap())) {
    return DomainError(absl::StrCat("minimum precision ", eta, " outside [0, ",
                                    spec.cap(), "]"));
  }
  return absl::OkStatus();
}

// Second-stage precision of each participant when p agents take part.
absl::StatusOr<double> ParticipantPrecision(int p, double eta,
                                            const HomogeneousGameSpec& spec) {
  auto free = ClosedFormLambdaStar(p, spec.privacy.coefficient(),
                                   spec.privacy.exponent(), spec.sigma2);
  if (!free.ok()) return free.status();
  return std::max(*free, eta);
}

struct CountCosts {
  ExtendedReal participant;
  ExtendedReal abstainer;
  double precision = 0.0;
};

absl::StatusOr<CountCosts> CostsAtCount(int p, double eta,
                                        const HomogeneousGameSpec& spec) {
  CountCosts out;
  if (p == 0) {
    out.participant = ExtendedReal::Infinite();
    out.abstainer = ExtendedReal::Infinite();
    return out;
  }
  auto lambda = ParticipantPrecision(p, eta, spec);
  if (!lambda.ok()) return lambda.status();
  out.precision = *lambda;
  const double variance = 1.0 / (p * *lambda);
  out.abstainer = ExtendedReal(variance);
  out.participant = ExtendedReal(spec.privacy.Value(*lambda) + variance);
  return out;
}

TwoStageResult FromCount(int p, double precision, double eta) {
  TwoStageResult r;
  r.eta = eta;
  r.participation_count = p;
  r.precision = precision;
  r.variance = p > 0 ? ExtendedReal(1.0 / (p * precision))
                     : ExtendedReal::Infinite();
  return r;
}

}  // namespace

int ParticipationProfile::count() const {
  return static_cast<int>(
      std::count(participates.begin(), participates.end(), true));
}

ParticipationProfile ParticipationProfile::WithCount(int n, int p) {
  ParticipationProfile out;
  out.participates.assign(static_cast<std::size_t>(std::max(n, 0)), false);
  for (int i = 0; i < std::min(n, p); ++i) out.participates[i] = true;
  return out;
}

absl::StatusOr<SecondStageOutcome> SecondStageEquilibrium(
    const ParticipationProfile& p, double eta, const HomogeneousGameSpec& spec) {
  if (absl::Status s = CheckTwoStageSpec(spec, eta); !s.ok()) return s;
  SecondStageOutcome out;
  out.lambda.assign(p.size(), 0.0);
  const int count = p.count();
  if (count == 0) {
    out.degenerate = true;
    out.variance = ExtendedReal::Infinite();
    return out;
  }
  auto lambda = ParticipantPrecision(count, eta, spec);
  if (!lambda.ok()) return lambda.status();
  out.participant_precision = *lambda;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.participates[i]) out.lambda[i] = *lambda;
  }
  out.variance = ExtendedReal(1.0 / (count * *lambda));
  return out;
}

absl::StatusOr<std::vector<ExtendedReal>> ReducedFirstStageCost(
    const ParticipationProfile& p, double eta, const HomogeneousGameSpec& spec) {
  auto outcome = SecondStageEquilibrium(p, eta, spec);
  if (!outcome.ok()) return outcome.status();
  std::vector<ExtendedReal> costs(p.size(), ExtendedReal::Infinite());
  if (outcome->degenerate) return costs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    costs[i] = ExtendedReal(spec.privacy.Value(outcome->lambda[i])) +
               outcome->variance;
  }
  return costs;
}

absl::StatusOr<std::vector<int>> ParticipationEquilibria(
    double eta, const HomogeneousGameSpec& spec) {
  if (absl::Status s = CheckTwoStageSpec(spec, eta); !s.ok()) return s;
  std::vector<CountCosts> costs;
  costs.reserve(spec.n + 1);
  for (int p = 0; p <= spec.n; ++p) {
    auto c = CostsAtCount(p, eta, spec);
    if (!c.ok()) return c.status();
    costs.push_back(*c);
  }
  std::vector<int> found;
  for (int p = 0; p <= spec.n; ++p) {
    // A participant must not prefer abstaining, and an abstainer must not
    // prefer joining.
    const bool stay = p == 0 || WeaklyBelow(costs[p].participant,
                                            costs[p - 1].abstainer);
    const bool out = p == spec.n || WeaklyBelow(costs[p].abstainer,
                                                costs[p + 1].participant);
    if (stay && out) found.push_back(p);
  }
  return found;
}

absl::StatusOr<bool> FullParticipationStable(double eta,
                                             const HomogeneousGameSpec& spec) {
  if (absl::Status s = CheckTwoStageSpec(spec, eta); !s.ok()) return s;
  auto full = CostsAtCount(spec.n, eta, spec);
  if (!full.ok()) return full.status();
  auto fewer = CostsAtCount(spec.n - 1, eta, spec);
  if (!fewer.ok()) return fewer.status();
  return WeaklyBelow(full->participant, fewer->abstainer);
}

absl::StatusOr<TwoStageResult> TwoStageEquilibrium(
    double eta, const HomogeneousGameSpec& spec) {
  if (absl::Status s = CheckTwoStageSpec(spec, eta); !s.ok()) return s;
  const double c = spec.privacy.coefficient();
  const double k = spec.privacy.exponent();
  auto counts = ParticipationEquilibria(eta, spec);
  if (!counts.ok()) return counts.status();
  if (spec.n >= 2) {
    auto lower = ClosedFormLambdaStar(spec.n - 1, c, k, spec.sigma2);
    if (!lower.ok()) return lower.status();
    auto upper = ClosedFormEtaStar(spec.n, c, k, spec.sigma2);
    if (!upper.ok()) return upper.status();
    if (eta >= *lower && eta <= *upper) {
      auto lambda = ParticipantPrecision(spec.n, eta, spec);
      if (!lambda.ok()) return lambda.status();
      TwoStageResult r = FromCount(spec.n, *lambda, eta);
      r.in_full_participation_range = true;
      // Other counts can also be equilibria here (p = 2 for n = 10, c = 1,
      // k = 2), so uniqueness comes from the search, not the range.
      r.equilibrium_counts = *counts;
      r.unique = *counts == std::vector<int>{spec.n};
      return r;
    }
  }

  TwoStageResult best = FromCount(0, 0.0, eta);
  for (int p : *counts) {
    if (p == 0) continue;
    auto lambda = ParticipantPrecision(p, eta, spec);
    if (!lambda.ok()) return lambda.status();
    TwoStageResult r = FromCount(p, *lambda, eta);
    if (r.variance < best.variance) best = r;
  }
  best.equilibrium_counts = *counts;
  best.unique = counts->size() == 1;
  return best;
}

absl::StatusOr<std::vector<TwoStageResult>> TwoStageEtaScan(
    const HomogeneousGameSpec& spec, std::span<const double> etas) {
  std::vector<absl::StatusOr<TwoStageResult>> results(
      etas.size(), absl::UnknownError("not run"));
  ParallelFor(etas.size(), [&](std::size_t i) {
    results[i] = TwoStageEquilibrium(etas[i], spec);
  });
  std::vector<TwoStageResult> out;
  out.reserve(etas.size());
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

absl::Status ValidateSpec(const AnalystCostSpec& spec) {
  if (!(spec.C >= 0.0) || !std::isfinite(spec.C)) {
    return absl::InvalidArgumentError(
        absl::StrCat("per-agent cost must be >= 0, got ", spec.C));
  }
  if (spec.n_max < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_max must be >= 1, got ", spec.n_max));
  }
  HomogeneousGameSpec game = spec.game;
  game.eta.reset();
  return ValidateSpec(game);
}

absl::StatusOr<double> AnalystCost(int n, const AnalystCostSpec& spec) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  double precision = 0.0;
  if (n == 1) {
    auto eq = EquilibriumForCount(spec.game, 1);
    if (!eq.ok()) return eq.status();
    precision = eq->lambda_star;
  } else {
    auto eta = OptimalMinimumPrecision(spec.game, n);
    if (!eta.ok()) return eta.status();
    precision = eta->eta_star;
  }
  return spec.game.estimation.Value(1.0 / (n * precision)) + spec.C * n;
}

absl::StatusOr<std::vector<double>> ExhaustiveAgentCountScan(
    const AnalystCostSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  std::vector<absl::StatusOr<double>> costs(spec.n_max,
                                            absl::UnknownError("not run"));
  ParallelFor(costs.size(), [&](std::size_t i) {
    costs[i] = AnalystCost(static_cast<int>(i) + 1, spec);
  });
  std::vector<double> out;
  out.reserve(costs.size());
  for (auto& c : costs) {
    if (!c.ok()) return c.status();
    out.push_back(*c);
  }
  return out;
}

absl::StatusOr<AgentCountChoice> OptimalAgentCount(const AnalystCostSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  auto qualifies = [&](int m) -> absl::StatusOr<bool> {
    auto eta = OptimalMinimumPrecision(spec.game, m);
    if (!eta.ok()) return eta.status();
    return spec.game.privacy.Value(eta->eta_star) >= spec.C;
  };

  AgentCountChoice choice;
  if (spec.n_max >= 2) {
    auto first = qualifies(2);
    if (!first.ok()) return first.status();
    if (*first) {
      auto last = qualifies(spec.n_max);
      if (!last.ok()) return last.status();
      if (*last) {
        choice.n_star = spec.n_max;
      } else {
        int lo = 2;            // qualifies
        int hi = spec.n_max;   // does not
        while (hi - lo > 1) {
          const int mid = lo + (hi - lo) / 2;
          auto q = qualifies(mid);
          if (!q.ok()) return q.status();
          (*q ? lo : hi) = mid;
        }
        choice.n_star = lo;
      }
    }
  }

  choice.rule_verified = true;
  if (choice.n_star >= 2) {
    auto at = qualifies(choice.n_star);
    if (!at.ok()) return at.status();
    choice.rule_verified = *at;
  }
  if (choice.n_star < spec.n_max) {
    auto next = qualifies(std::max(choice.n_star + 1, 2));
    if (!next.ok()) return next.status();
    if (*next) choice.rule_verified = false;
  }

  auto cost = AnalystCost(choice.n_star, spec);
  if (!cost.ok()) return cost.status();
  choice.cost = *cost;

  auto scan = ExhaustiveAgentCountScan(spec);
  if (!scan.ok()) return scan.status();
  const auto best = std::min_element(scan->begin(), scan->end());
  choice.scan_argmin = static_cast<int>(best - scan->begin()) + 1;
  choice.scan_cost = *best;
  choice.matches_scan = choice.scan_argmin == choice.n_star;
  return choice;
}

bool DefinitelyIncreasing(std::span<const double> values) {
  bool rising = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) {
      rising = true;
    } else if (rising) {
      return false;
    }
  }
  return true;
}

}  // namespace privgame
