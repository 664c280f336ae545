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
#include "privgame/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "privgame/parallel.h"

namespace privgame {
namespace {

constexpr double kMaxPotentialEvaluations = 2e8;

ExtendedReal CostOf(double own, double others, const PrivacyCost& cost,
                    const EstimationCost& estimation) {
  const double total = others + own;
  if (!(total > 0.0)) return ExtendedReal::Infinite();
  return ExtendedReal(cost.Value(own) + estimation.Value(1.0 / total));
}

std::vector<double> GridFor(const StrategySet& set, int points) {
  std::vector<double> grid;
  grid.reserve(points + 1);
  if (set.isolated_zero && set.floor > 0.0) grid.push_back(0.0);
  for (int j = 0; j < points; ++j) {
    grid.push_back(j + 1 == points
                       ? set.cap
                       : set.floor + (set.cap - set.floor) * j / (points - 1));
  }
  return grid;
}

double Gap(const ExtendedReal& candidate, const ExtendedReal& best) {
  if (candidate.is_infinite()) {
    return best.is_infinite() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (best.is_infinite()) return -std::numeric_limits<double>::infinity();
  return candidate.value() - best.value();
}

}  // namespace

StrategySet StrategySet::Box(double cap) {
  return StrategySet{0.0, cap, false};
}

StrategySet StrategySet::WithFloor(double eta, double cap) {
  return StrategySet{eta, cap, true};
}

bool StrategySet::Contains(double lambda) const {
  if (isolated_zero && lambda == 0.0) return true;
  return lambda >= floor && lambda <= cap;
}

absl::StatusOr<DeviationScanResult> BestResponseScan(
    std::size_t agent, const PrecisionProfile& profile,
    const StrategySet& strategies, int grid_points,
    std::span<const PrivacyCost> costs, const EstimationCost& estimation) {
  if (grid_points < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid_points must be >= 2, got ", grid_points));
  }
  if (costs.size() != profile.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        costs.size(), " costs for a profile of ", profile.size(), " agents"));
  }
  if (agent >= profile.size()) {
    return absl::InvalidArgumentError(absl::StrCat("no agent ", agent));
  }
  if (!(strategies.floor >= 0.0 && strategies.floor <= strategies.cap)) {
    return absl::InvalidArgumentError("strategy set floor outside [0, cap]");
  }

  double others = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != agent) others += profile[j];
  }
  const PrivacyCost& cost = costs[agent];

  DeviationScanResult result;
  result.agent = agent;
  result.grid_points = grid_points;
  result.candidate_in_set = strategies.Contains(profile[agent]);
  result.candidate_cost = CostOf(profile[agent], others, cost, estimation);
  result.best_cost = ExtendedReal::Infinite();
  bool first = true;
  for (double x : GridFor(strategies, grid_points)) {
    const ExtendedReal j = CostOf(x, others, cost, estimation);
    if (first || j < result.best_cost) {
      result.best_cost = j;
      result.best_deviation = x;
      first = false;
    }
  }
  result.improvement = Gap(result.candidate_cost, result.best_cost);
  return result;
}

absl::StatusOr<NashVerdict> VerifyNash(
    const PrecisionProfile& profile, std::span<const StrategySet> strategies,
    int grid_points, double tolerance, std::span<const PrivacyCost> costs,
    const EstimationCost& estimation) {
  if (strategies.size() != 1 && strategies.size() != profile.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 1 or ", profile.size(), " strategy sets, got ",
                     strategies.size()));
  }
  if (!(tolerance >= 0.0)) {
    return absl::InvalidArgumentError("tolerance must be >= 0");
  }
  std::vector<absl::StatusOr<DeviationScanResult>> scans(
      profile.size(), absl::UnknownError("not run"));
  ParallelFor(profile.size(), [&](std::size_t i) {
    const StrategySet& set = strategies.size() == 1 ? strategies[0] : strategies[i];
    scans[i] = BestResponseScan(i, profile, set, grid_points, costs, estimation);
  });

  NashVerdict verdict;
  for (auto& scan : scans) {
    if (!scan.ok()) return scan.status();
    const bool refutes = !scan->candidate_in_set || scan->improvement > tolerance;
    if (refutes) {
      verdict.certified = false;
      if (!verdict.witness.has_value() ||
          scan->improvement > verdict.witness->improvement) {
        verdict.witness = *scan;
      }
    }
    verdict.scans.push_back(*std::move(scan));
  }
  return verdict;
}

absl::StatusOr<PotentialGridResult> PotentialGridArgmin(
    const HeterogeneousGameSpec& spec, int grid_points) {
  const std::size_t n = spec.size();
  if (n == 0) return absl::InvalidArgumentError("no agents");
  if (n > kMaxPotentialGridAgents) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid search over ", n, " agents is exponential; at most ",
        kMaxPotentialGridAgents,
        " are supported, use the coordinate-descent solver with VerifyNash "
        "instead"));
  }
  if (grid_points < 2) {
    return absl::InvalidArgumentError("grid_points must be >= 2");
  }
  if (!(spec.sigma2 > 0.0)) {
    return absl::InvalidArgumentError("sigma2 must be positive");
  }
  if (std::pow(static_cast<double>(grid_points), static_cast<double>(n)) >
      kMaxPotentialEvaluations) {
    return absl::InvalidArgumentError(absl::StrCat(
        grid_points, "^", n, " grid points is too many; lower grid_points"));
  }
  const double cap = spec.cap();
  const double floor = spec.eta.value_or(0.0);
  const double width = (cap - floor) / (grid_points - 1);
  auto axis = [&](int j) {
    return j + 1 == grid_points ? cap : floor + width * j;
  };

  std::size_t total_points = 1;
  for (std::size_t i = 0; i < n; ++i) total_points *= grid_points;

  // Split the outermost axis across workers, reduce in index order.
  struct Best {
    std::vector<double> lambda;
    ExtendedReal potential = ExtendedReal::Infinite();
  };
  std::vector<Best> partial(grid_points);
  const std::size_t inner = total_points / grid_points;
  ParallelFor(grid_points, [&](std::size_t outer) {
    std::vector<double> lambda(n);
    Best& best = partial[outer];
    for (std::size_t flat = 0; flat < inner; ++flat) {
      std::size_t rest = flat;
      lambda[0] = axis(static_cast<int>(outer));
      for (std::size_t i = 1; i < n; ++i) {
        lambda[i] = axis(static_cast<int>(rest % grid_points));
        rest /= grid_points;
      }
      double privacy = 0.0;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!spec.is_solicited(i)) lambda[i] = 0.0;
        privacy += spec.costs[i].Value(lambda[i]);
        sum += lambda[i];
      }
      if (sum <= 0.0) continue;
      const ExtendedReal phi(privacy + spec.estimation.Value(1.0 / sum));
      if (phi < best.potential) {
        best.potential = phi;
        best.lambda = lambda;
      }
    }
  });

  PotentialGridResult out;
  out.potential = ExtendedReal::Infinite();
  out.cell_width = width;
  for (Best& b : partial) {
    if (b.potential < out.potential) {
      out.potential = b.potential;
      out.lambda = std::move(b.lambda);
    }
  }
  if (out.lambda.empty()) {
    return absl::FailedPreconditionError("no grid profile has finite potential");
  }
  return out;
}

}  // namespace privgame
