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
#ifndef PRIVGAME_ORACLE_H_
#define PRIVGAME_ORACLE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgame/cost_model.h"
#include "privgame/estimator.h"
#include "privgame/heterogeneous.h"

namespace privgame {

inline constexpr int kDefaultOracleGridPoints = 2001;
inline constexpr double kDefaultOracleTolerance = 1e-9;

// Either the full box [0, cap] or {0} union [eta, cap].
struct StrategySet {
  double floor = 0.0;
  double cap = 1.0;
  bool isolated_zero = false;

  static StrategySet Box(double cap);
  static StrategySet WithFloor(double eta, double cap);
  bool Contains(double lambda) const;
};

struct DeviationScanResult {
  std::size_t agent = 0;
  double best_deviation = 0.0;
  ExtendedReal candidate_cost;
  ExtendedReal best_cost;
  // candidate_cost - best_cost; positive means the deviation pays.
  double improvement = 0.0;
  int grid_points = 0;
  bool candidate_in_set = true;
};

// Evaluates J_i on a uniform grid over the strategy set (endpoints, the floor
// and the isolated 0 always included) with the other precisions held fixed.
absl::StatusOr<DeviationScanResult> BestResponseScan(
    std::size_t agent, const PrecisionProfile& profile,
    const StrategySet& strategies, int grid_points,
    std::span<const PrivacyCost> costs, const EstimationCost& estimation);

struct NashVerdict {
  bool certified = true;
  std::vector<DeviationScanResult> scans;
  // Most profitable deviation when refuted.
  std::optional<DeviationScanResult> witness;
};

// Certified iff every candidate lies in its set and no scan improves on it by
// more than tolerance. A single strategy set applies to every agent.
absl::StatusOr<NashVerdict> VerifyNash(
    const PrecisionProfile& profile, std::span<const StrategySet> strategies,
    int grid_points, double tolerance, std::span<const PrivacyCost> costs,
    const EstimationCost& estimation);

struct PotentialGridResult {
  std::vector<double> lambda;
  ExtendedReal potential;
  double cell_width = 0.0;
};

inline constexpr int kMaxPotentialGridAgents = 4;

// Exhaustive minimum of the potential over a product grid on [floor, cap]
// (floor = eta when set, else 0), skipping the all-zero profile.
absl::StatusOr<PotentialGridResult> PotentialGridArgmin(
    const HeterogeneousGameSpec& spec, int grid_points);

}  // namespace privgame

#endif  // PRIVGAME_ORACLE_H_
