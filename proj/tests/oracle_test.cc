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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "privgame/homogeneous.h"
#include "test_util.h"

namespace privgame {
namespace {

using testing::Het;
using testing::Hom;
using testing::Mono;

PrecisionProfile Profile(std::vector<double> lambda, double sigma2) {
  auto p = PrecisionProfile::Create(std::move(lambda), sigma2);
  EXPECT_TRUE(p.ok());
  return *p;
}

std::vector<PrivacyCost> Same(int n, double c, double k) {
  return std::vector<PrivacyCost>(n, Mono(c, k));
}

TEST(BestResponseScanTest, Examples) {
  const EstimationCost f = EstimationCost::Linear();
  auto eq = BestResponseScan(0, Profile({0.5, 0.5}, 0.1), StrategySet::Box(10),
                             2001, Same(2, 1, 2), f);
  ASSERT_TRUE(eq.ok());
  EXPECT_LE(eq->improvement, 1e-9);

  auto off = BestResponseScan(0, Profile({0.6, 0.5}, 0.1), StrategySet::Box(10),
                              2001, Same(2, 1, 2), f);
  ASSERT_TRUE(off.ok());
  EXPECT_GT(off->improvement, 0.0);
  EXPECT_LT(off->best_deviation, 0.6);

  auto high = BestResponseScan(3, Profile(std::vector<double>(10, 0.25), 0.1),
                               StrategySet::WithFloor(0.25, 10), 2001,
                               Same(10, 1, 2), f);
  ASSERT_TRUE(high.ok());
  EXPECT_GT(high->improvement, 0.0);
  EXPECT_EQ(high->best_deviation, 0.0);
}

TEST(BestResponseScanTest, Errors) {
  const EstimationCost f = EstimationCost::Linear();
  EXPECT_FALSE(BestResponseScan(0, Profile({0.5}, 1), StrategySet::Box(1), 1,
                                Same(1, 1, 2), f)
                   .ok());
  EXPECT_FALSE(BestResponseScan(1, Profile({0.5}, 1), StrategySet::Box(1), 5,
                                Same(1, 1, 2), f)
                   .ok());
  EXPECT_FALSE(BestResponseScan(0, Profile({0.5}, 1), StrategySet::Box(1), 5,
                                Same(2, 1, 2), f)
                   .ok());
}

TEST(VerifyNashTest, HomogeneousSolverOutputCertified) {
  for (int n = 1; n <= 6; ++n) {
    const HomogeneousGameSpec spec = Hom(n, 1, 2, 0.1);
    auto eq = SolveUnrestricted(spec);
    ASSERT_TRUE(eq.ok());
    const std::vector<StrategySet> sets = {StrategySet::Box(10)};
    auto v = VerifyNash(Profile(std::vector<double>(n, eq->lambda_star), 0.1),
                        sets, 2001, 1e-9, Same(n, 1, 2), spec.estimation);
    ASSERT_TRUE(v.ok());
    EXPECT_TRUE(v->certified) << n;
    // Symmetric game, symmetric verdict.
    for (const auto& scan : v->scans) {
      EXPECT_EQ(scan.best_deviation, v->scans[0].best_deviation);
    }
  }
}

TEST(VerifyNashTest, HeterogeneousWitnessCertified) {
  auto eq = SolveUnrestricted(Het({1, 2}, 2, 0.1));
  ASSERT_TRUE(eq.ok());
  const std::vector<StrategySet> sets = {StrategySet::Box(10)};
  const std::vector<PrivacyCost> costs = {Mono(1, 2), Mono(2, 2)};
  auto v = VerifyNash(Profile(eq->lambda, 0.1), sets, 2001, 1e-9, costs,
                      EstimationCost::Linear());
  ASSERT_TRUE(v.ok());
  EXPECT_TRUE(v->certified);
  auto fine = VerifyNash(Profile(eq->lambda, 0.1), sets, 4001, 1e-9, costs,
                         EstimationCost::Linear());
  ASSERT_TRUE(fine.ok());
  EXPECT_TRUE(fine->certified);
}

TEST(VerifyNashTest, AllZeroRefuted) {
  const std::vector<StrategySet> sets = {StrategySet::Box(1)};
  auto v = VerifyNash(Profile({0.0, 0.0}, 1), sets, 101, 1e-9, Same(2, 1, 2),
                      EstimationCost::Linear());
  ASSERT_TRUE(v.ok());
  EXPECT_FALSE(v->certified);
  ASSERT_TRUE(v->witness.has_value());
  EXPECT_GT(v->witness->best_deviation, 0.0);
  EXPECT_TRUE(std::isinf(v->witness->improvement));
}

TEST(VerifyNashTest, RestrictedGameAroundEtaStar) {
  const double eta_star = std::cbrt(1.0 / 90.0);
  const std::vector<PrivacyCost> costs = Same(10, 1, 2);
  for (double eta : {0.19, 0.2, eta_star}) {
    const std::vector<StrategySet> sets = {StrategySet::WithFloor(eta, 10)};
    auto v = VerifyNash(Profile(std::vector<double>(10, eta), 0.1), sets, 2001,
                        1e-9, costs, EstimationCost::Linear());
    ASSERT_TRUE(v.ok());
    EXPECT_TRUE(v->certified) << eta;
  }
  const std::vector<StrategySet> sets = {StrategySet::WithFloor(0.25, 10)};
  auto v = VerifyNash(Profile(std::vector<double>(10, 0.25), 0.1), sets, 2001,
                      1e-9, costs, EstimationCost::Linear());
  ASSERT_TRUE(v.ok());
  EXPECT_FALSE(v->certified);
  EXPECT_EQ(v->witness->best_deviation, 0.0);
}

TEST(VerifyNashTest, CandidateOutsideSetRefuted) {
  const std::vector<StrategySet> sets = {StrategySet::WithFloor(0.3, 1)};
  auto v = VerifyNash(Profile({0.1, 0.5}, 1), sets, 11, 1e-9, Same(2, 1, 2),
                      EstimationCost::Linear());
  ASSERT_TRUE(v.ok());
  EXPECT_FALSE(v->certified);
  EXPECT_FALSE(v->witness->candidate_in_set);
}

TEST(PotentialGridTest, Examples) {
  auto two = PotentialGridArgmin(Het({1, 2}, 2, 0.1), 400);
  ASSERT_TRUE(two.ok());
  EXPECT_LE(std::abs(two->lambda[0] - 0.605707), two->cell_width);
  EXPECT_LE(std::abs(two->lambda[1] - 0.302853), two->cell_width);

  auto one = PotentialGridArgmin(Het({1}, 2, 0.1), 400);
  ASSERT_TRUE(one.ok());
  EXPECT_LE(std::abs(one->lambda[0] - 0.793701), one->cell_width);

  auto sym = PotentialGridArgmin(Het({1, 1}, 2, 1.0), 401);
  ASSERT_TRUE(sym.ok());
  EXPECT_EQ(sym->lambda[0], sym->lambda[1]);
}

TEST(PotentialGridTest, ThreeAgentsAgreeWithSolver) {
  const HeterogeneousGameSpec spec = Het({1, 2, 4}, 2, 1.0);
  auto grid = PotentialGridArgmin(spec, 201);
  auto eq = SolveUnrestricted(spec);
  ASSERT_TRUE(grid.ok() && eq.ok());
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(grid->lambda[i] - eq->lambda[i]), grid->cell_width) << i;
  }
}

TEST(PotentialGridTest, RefusesLargeGames) {
  auto r = PotentialGridArgmin(Het({1, 1, 1, 1, 1}, 2, 1.0), 10);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace privgame
