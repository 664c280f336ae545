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
#ifndef PRIVGAME_HETEROGENEOUS_H_
#define PRIVGAME_HETEROGENEOUS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgame/cost_model.h"

namespace privgame {

// Agents with individual privacy costs, expected ordered so that c_1' <= ... <=
// c_n' pointwise (agent n is the most privacy-concerned). An empty solicited
// mask means every agent is asked; unsolicited agents sit at precision 0.
struct HeterogeneousGameSpec {
  std::vector<PrivacyCost> costs;
  double sigma2 = 1.0;
  EstimationCost estimation = EstimationCost::Linear();
  std::optional<double> eta;
  std::vector<bool> solicited;

  double cap() const { return 1.0 / sigma2; }
  std::size_t size() const { return costs.size(); }
  bool is_solicited(std::size_t i) const {
    return solicited.empty() || solicited[i];
  }
  std::size_t solicited_count() const;
};

absl::Status ValidateSpec(const HeterogeneousGameSpec& spec);

struct OrderingReport {
  bool ordered = true;
  // First pair (agent, agent + 1) and precision where c'_agent > c'_(agent+1).
  std::optional<std::size_t> agent;
  std::optional<double> at;
};

// Sampled check of c_i'(lambda) <= c_(i+1)'(lambda) on (0, 1/sigma2].
OrderingReport CheckCostOrdering(const HeterogeneousGameSpec& spec,
                                 int samples = 1000);

struct CoordinateDescentDiagnostics {
  int sweeps = 0;
  double max_change = 0.0;
  // Largest scaled |c_i'(lambda_i) - F'(1/L)/L^2| over interior coordinates.
  double kkt_residual = 0.0;
};

struct HeterogeneousEquilibrium {
  std::vector<double> lambda;
  ExtendedReal variance;
  // Per agent: solicited and not better off withholding.
  std::vector<bool> participation;
  ExtendedReal potential;
  bool full_participation = true;
  bool ordering_ok = true;
  CoordinateDescentDiagnostics diagnostics;
};

// Phi(lambda) = sum_j c_j(lambda_j) + F(1 / sum_j lambda_j).
absl::StatusOr<ExtendedReal> Potential(const HeterogeneousGameSpec& spec,
                                       std::span<const double> lambda);

// Unique equilibrium of the unrestricted game: the minimiser of Phi over
// [0, 1/sigma2]^s. spec.eta must be unset.
absl::StatusOr<HeterogeneousEquilibrium> SolveUnrestricted(
    const HeterogeneousGameSpec& spec);

// Minimiser of Phi over [eta, 1/sigma2]^s followed by the withdrawal check:
// an agent for whom precision 0 is strictly cheaper is flagged and
// full_participation becomes false.
absl::StatusOr<HeterogeneousEquilibrium> SolveRestricted(
    const HeterogeneousGameSpec& spec);

struct HeterogeneousMinimumPrecision {
  double eta_star = 0.0;
  bool at_cap = false;
  // Withdrawal margin at eta_star (zero at an interior root).
  double residual = 0.0;
  int iterations = 0;
};

// eta*(S): root of the most-concerned agent's indifference between her
// constrained-minimum precision and withholding. Needs s >= 2.
absl::StatusOr<HeterogeneousMinimumPrecision> OptimalMinimumPrecision(
    const HeterogeneousGameSpec& spec);

// (1 / (c_n n (n-1)))^(1/(k+1)) capped at 1/sigma2, valid when k > c_n / c_1.
absl::StatusOr<double> ClosedFormHeterogeneousEtaStar(
    std::span<const double> coefficients, double k, double sigma2);

struct AgentEntryEffect {
  std::vector<double> before;
  std::vector<double> after;  // one longer than before
  ExtendedReal variance_before;
  ExtendedReal variance_after;
  bool incumbents_weakly_decrease = true;
  bool variance_weakly_decreases = true;
};

// Re-solves the unrestricted game with one more agent appended.
absl::StatusOr<AgentEntryEffect> AddAgentEffect(
    const HeterogeneousGameSpec& spec, const PrivacyCost& new_cost);

}  // namespace privgame

#endif  // PRIVGAME_HETEROGENEOUS_H_
