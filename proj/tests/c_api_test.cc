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
#include "privgame/privgame.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace {

double Square(double x, void* user) { return *static_cast<double*>(user) * x * x; }
double TwiceX(double x, void* user) { return 2 * *static_cast<double*>(user) * x; }
double Two(double, void* user) { return 2 * *static_cast<double*>(user); }

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(privgame_privacy_cost_monomial(1.0, 2.0, &cost_), PRIVGAME_OK);
    ASSERT_EQ(privgame_hom_game_create(10, 0.1, cost_, nullptr, &game_),
              PRIVGAME_OK);
  }
  void TearDown() override {
    privgame_hom_game_free(game_);
    privgame_privacy_cost_free(cost_);
  }

  privgame_privacy_cost* cost_ = nullptr;
  privgame_hom_game* game_ = nullptr;
};

TEST(CApiBasics, VersionAndNames) {
  EXPECT_NE(std::string(privgame_version()), "");
  EXPECT_STREQ(privgame_status_name(PRIVGAME_OK), "OK");
  EXPECT_STREQ(privgame_status_name(PRIVGAME_ERR_DOMAIN), "DOMAIN");
}

TEST(CApiBasics, ErrorCodesAndMessage) {
  privgame_privacy_cost* cost = nullptr;
  EXPECT_EQ(privgame_privacy_cost_monomial(-1.0, 2.0, &cost),
            PRIVGAME_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(cost, nullptr);
  EXPECT_NE(std::string(privgame_last_error_message()).find("coefficient"),
            std::string::npos);

  EXPECT_EQ(privgame_privacy_cost_monomial(1.0, 2.0, nullptr),
            PRIVGAME_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(privgame_privacy_cost_monomial(1.0, 2.0, &cost), PRIVGAME_OK);
  double v = 0, d = 0;
  EXPECT_EQ(privgame_privacy_cost_eval(cost, 0.1, 11.0, &v, &d), PRIVGAME_ERR_DOMAIN);
  EXPECT_EQ(privgame_privacy_cost_eval(cost, 0.1, 2.0, &v, &d), PRIVGAME_OK);
  EXPECT_DOUBLE_EQ(v, 4.0);
  EXPECT_DOUBLE_EQ(d, 4.0);
  privgame_privacy_cost_free(cost);
}

TEST(CApiBasics, Estimator) {
  const double lambda[] = {1.0, 2.0, 1.0};
  const double values[] = {0.0, 3.0, 6.0};
  double mean = 0;
  ASSERT_EQ(privgame_gls_mean(lambda, values, 3, 0.5, &mean), PRIVGAME_OK);
  EXPECT_DOUBLE_EQ(mean, 3.0);
  const double zero[] = {0.0, 0.0};
  EXPECT_EQ(privgame_gls_mean(zero, values, 2, 0.5, &mean),
            PRIVGAME_ERR_ESTIMATION_IMPOSSIBLE);
  double variance = 0;
  ASSERT_EQ(privgame_estimator_variance(zero, 2, 0.5, &variance), PRIVGAME_OK);
  EXPECT_TRUE(std::isinf(variance));
}

TEST(CApiBasics, MonteCarloDeterministic) {
  const double lambda[] = {5.0, 5.0};
  privgame_mc_report a{}, b{};
  ASSERT_EQ(privgame_monte_carlo(lambda, 2, 0.1, 1.0, PRIVGAME_NOISE_GAUSSIAN,
                                 2000, 7, &a),
            PRIVGAME_OK);
  ASSERT_EQ(privgame_monte_carlo(lambda, 2, 0.1, 1.0, PRIVGAME_NOISE_GAUSSIAN,
                                 2000, 7, &b),
            PRIVGAME_OK);
  EXPECT_EQ(a.empirical_bias, b.empirical_bias);
  EXPECT_EQ(a.empirical_variance, b.empirical_variance);
  EXPECT_DOUBLE_EQ(a.theoretical_variance, 0.1);
}

TEST_F(CApiTest, HomogeneousSolve) {
  privgame_hom_equilibrium eq{};
  ASSERT_EQ(privgame_hom_solve(game_, &eq), PRIVGAME_OK);
  EXPECT_NEAR(eq.lambda_star, std::cbrt(1.0 / 200.0), 1e-12);
  EXPECT_TRUE(eq.full_participation);

  privgame_min_precision mp{};
  ASSERT_EQ(privgame_hom_eta_star(game_, 10, &mp), PRIVGAME_OK);
  EXPECT_NEAR(mp.eta_star, std::cbrt(1.0 / 90.0), 1e-10);
  EXPECT_EQ(privgame_hom_eta_star(game_, 1, &mp), PRIVGAME_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(privgame_hom_game_set_eta(game_, 0.25), PRIVGAME_OK);
  ASSERT_EQ(privgame_hom_solve(game_, &eq), PRIVGAME_OK);
  EXPECT_FALSE(eq.full_participation);
  EXPECT_TRUE(std::isnan(eq.lambda_star));
  EXPECT_EQ(privgame_hom_game_set_eta(game_, 20.0), PRIVGAME_ERR_DOMAIN);
}

TEST_F(CApiTest, SweepBufferTooSmall) {
  double grid[3];
  EXPECT_EQ(privgame_sweep_grid(1, 5, 5, 0, grid, 3), PRIVGAME_ERR_BUFFER_TOO_SMALL);
  double full[5];
  ASSERT_EQ(privgame_sweep_grid(1, 5, 5, 0, full, 5), PRIVGAME_OK);
  std::vector<privgame_sweep_record> records(5);
  ASSERT_EQ(privgame_hom_sweep(game_, "n", full, 5, records.data()),
            PRIVGAME_OK);
  EXPECT_NE(std::string(records[0].diagnostic), "");  // eta*(1) undefined
  EXPECT_EQ(std::string(records[1].diagnostic), "");
  EXPECT_EQ(privgame_hom_sweep(game_, "bogus", full, 5, records.data()),
            PRIVGAME_ERR_INVALID_ARGUMENT);
}

TEST_F(CApiTest, TwoStageAndAnalyst) {
  privgame_two_stage_result r{};
  ASSERT_EQ(privgame_two_stage(game_, 0.2, &r, nullptr, 0), PRIVGAME_OK);
  EXPECT_EQ(r.participation_count, 10);
  EXPECT_TRUE(r.in_full_participation_range);
  EXPECT_FALSE(r.unique);
  int counts[4];
  ASSERT_EQ(privgame_two_stage(game_, 0.2, &r, counts, 4), PRIVGAME_OK);
  ASSERT_EQ(r.num_equilibrium_counts, 2u);
  EXPECT_EQ(counts[0], 2);
  EXPECT_EQ(counts[1], 10);
  int stable = 0;
  ASSERT_EQ(privgame_full_participation_stable(game_, 0.2, &stable), PRIVGAME_OK);
  EXPECT_TRUE(stable);

  privgame_agent_count choice{};
  ASSERT_EQ(privgame_optimal_agent_count(game_, 1.0, 50, &choice), PRIVGAME_OK);
  EXPECT_EQ(choice.n_star, 1);
  std::vector<double> scan(50);
  EXPECT_EQ(privgame_agent_count_scan(game_, 1.0, 50, scan.data(), 10),
            PRIVGAME_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(privgame_agent_count_scan(game_, 1.0, 50, scan.data(), 50),
            PRIVGAME_OK);
  EXPECT_NEAR(scan[1], 2.62996, 1e-5);
}

TEST(CApiHet, SolveAndVerify) {
  privgame_privacy_cost* a = nullptr;
  privgame_privacy_cost* b = nullptr;
  privgame_het_game* game = nullptr;
  ASSERT_EQ(privgame_privacy_cost_monomial(1, 2, &a), PRIVGAME_OK);
  ASSERT_EQ(privgame_privacy_cost_monomial(2, 2, &b), PRIVGAME_OK);
  ASSERT_EQ(privgame_het_game_create(0.1, nullptr, &game), PRIVGAME_OK);
  ASSERT_EQ(privgame_het_game_add_agent(game, a), PRIVGAME_OK);
  ASSERT_EQ(privgame_het_game_add_agent(game, b), PRIVGAME_OK);
  EXPECT_EQ(privgame_het_game_size(game), 2u);

  double lambda[2];
  privgame_het_summary summary{};
  EXPECT_EQ(privgame_het_solve(game, lambda, nullptr, 1, &summary),
            PRIVGAME_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(privgame_het_solve(game, lambda, nullptr, 2, &summary), PRIVGAME_OK);
  EXPECT_NEAR(lambda[0], 0.6057068642773051, 1e-9);
  EXPECT_NEAR(lambda[1], 0.30285343213871985, 1e-9);

  const privgame_privacy_cost* costs[] = {a, b};
  const privgame_strategy_set box{0.0, 10.0, 0};
  int certified = 0;
  privgame_deviation witness{};
  ASSERT_EQ(privgame_verify_nash(lambda, 2, 0.1, &box, 1, 2001, 1e-9, costs,
                                 nullptr, &certified, &witness),
            PRIVGAME_OK);
  EXPECT_TRUE(certified);
  const double bad[] = {0.0, 0.0};
  ASSERT_EQ(privgame_verify_nash(bad, 2, 0.1, &box, 1, 101, 1e-9, costs,
                                 nullptr, &certified, &witness),
            PRIVGAME_OK);
  EXPECT_FALSE(certified);
  EXPECT_TRUE(std::isinf(witness.improvement));

  privgame_min_precision mp{};
  EXPECT_EQ(privgame_het_eta_star(game, &mp), PRIVGAME_OK);

  privgame_het_game_free(game);
  privgame_privacy_cost_free(a);
  privgame_privacy_cost_free(b);
}

TEST(CApiGeneric, CallbackCosts) {
  double scale = 1.0;
  privgame_privacy_cost* cost = nullptr;
  ASSERT_EQ(privgame_privacy_cost_generic(Square, TwiceX, Two, &scale, &cost),
            PRIVGAME_OK);
  privgame_estimation_cost* linear = nullptr;
  ASSERT_EQ(privgame_estimation_cost_linear(&linear), PRIVGAME_OK);
  int ok = 0;
  size_t needed = 0;
  ASSERT_EQ(privgame_validate_assumptions(cost, linear, 0.1, 64, &ok, nullptr, 0,
                                          &needed),
            PRIVGAME_OK);
  EXPECT_TRUE(ok);
  EXPECT_GT(needed, 1u);
  std::string text(needed, '\0');
  ASSERT_EQ(privgame_validate_assumptions(cost, linear, 0.1, 64, &ok, text.data(),
                                          text.size(), &needed),
            PRIVGAME_OK);
  EXPECT_NE(text.find("convex"), std::string::npos);

  privgame_hom_game* game = nullptr;
  ASSERT_EQ(privgame_hom_game_create(10, 0.1, cost, linear, &game), PRIVGAME_OK);
  privgame_hom_equilibrium eq{};
  ASSERT_EQ(privgame_hom_solve(game, &eq), PRIVGAME_OK);
  EXPECT_NEAR(eq.lambda_star, std::cbrt(1.0 / 200.0), 1e-9);
  // Two-stage needs the monomial form.
  privgame_two_stage_result r{};
  EXPECT_EQ(privgame_two_stage(game, 0.2, &r, nullptr, 0), PRIVGAME_ERR_PRECONDITION);

  privgame_hom_game_free(game);
  privgame_estimation_cost_free(linear);
  privgame_privacy_cost_free(cost);
}

}  // namespace
