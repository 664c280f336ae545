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
#ifndef PRIVGAME_EXTENSIONS_H_
#define PRIVGAME_EXTENSIONS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgame/cost_model.h"
#include "privgame/homogeneous.h"

namespace privgame {

// Binary participation choices committed in the first stage.
struct ParticipationProfile {
  std::vector<bool> participates;

  int count() const;
  std::size_t size() const { return participates.size(); }
  // First p agents participate, the rest abstain.
  static ParticipationProfile WithCount(int n, int p);
};

struct SecondStageOutcome {
  std::vector<double> lambda;
  // Precision shared by every participant; 0 when nobody participates.
  double participant_precision = 0.0;
  ExtendedReal variance;
  // No participant: the second-stage game is empty and nothing is estimated.
  bool degenerate = false;
};

// Participants play max{lambda*(p), eta}, the rest play 0. Needs a
// monomial/linear spec; spec.n and spec.eta are ignored.
absl::StatusOr<SecondStageOutcome> SecondStageEquilibrium(
    const ParticipationProfile& p, double eta, const HomogeneousGameSpec& spec);

// First-stage cost of each agent given the second-stage outcome; the +inf
// sentinel for everyone when nobody participates.
absl::StatusOr<std::vector<ExtendedReal>> ReducedFirstStageCost(
    const ParticipationProfile& p, double eta, const HomogeneousGameSpec& spec);

struct TwoStageResult {
  double eta = 0.0;
  int participation_count = 0;
  // Precision of each participant.
  double precision = 0.0;
  ExtendedReal variance = ExtendedReal::Infinite();
  // Exactly one participation count is an equilibrium.
  bool unique = false;
  // eta fell in [lambda*(n-1), eta*(n)]; the outcome is full participation.
  bool in_full_participation_range = false;
  // Participation counts that are equilibria of the reduced game.
  std::vector<int> equilibrium_counts;
};

// Symmetric-participation counts p in 0..n that are equilibria of the
// reduced first-stage game. Exhaustive; ignores the closed-form range.
absl::StatusOr<std::vector<int>> ParticipationEquilibria(
    double eta, const HomogeneousGameSpec& spec);

// Whether no participant gains by abstaining when all spec.n agents take part.
absl::StatusOr<bool> FullParticipationStable(double eta,
                                             const HomogeneousGameSpec& spec);

// Equilibrium of the two-stage game with spec.n agents and floor eta. When
// several participation counts qualify the lowest-variance one is returned.
absl::StatusOr<TwoStageResult> TwoStageEquilibrium(
    double eta, const HomogeneousGameSpec& spec);

// One two-stage solve per floor in the grid, in grid order.
absl::StatusOr<std::vector<TwoStageResult>> TwoStageEtaScan(
    const HomogeneousGameSpec& spec, std::span<const double> etas);

struct AnalystCostSpec {
  double C = 0.0;
  int n_max = 1;
  HomogeneousGameSpec game;
};

absl::Status ValidateSpec(const AnalystCostSpec& spec);

// J_A(n) = F(1/(n eta*(n))) + C n; n = 1 uses the single-agent equilibrium.
absl::StatusOr<double> AnalystCost(int n, const AnalystCostSpec& spec);

struct AgentCountChoice {
  int n_star = 1;
  double cost = 0.0;
  // Largest m with c(eta*(m)) >= C was confirmed by direct evaluation at
  // n_star and n_star + 1.
  bool rule_verified = false;
  // Exhaustive scan over 1..n_max for comparison.
  int scan_argmin = 1;
  double scan_cost = 0.0;
  bool matches_scan = false;
};

// n* = max{m >= 2 : c(eta*(m)) >= C} capped at n_max, or 1 if no m
// qualifies. Found by bisection on the non-increasing c(eta*(m)).
absl::StatusOr<AgentCountChoice> OptimalAgentCount(const AnalystCostSpec& spec);

// J_A(m) for m = 1..n_max; element m-1 holds J_A(m).
absl::StatusOr<std::vector<double>> ExhaustiveAgentCountScan(
    const AnalystCostSpec& spec);

// True when the first strict increase is followed only by strict increases.
bool DefinitelyIncreasing(std::span<const double> values);

}  // namespace privgame

#endif  // PRIVGAME_EXTENSIONS_H_
