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
// C interface to the privgame library. Objects are opaque handles created and
// released through this API. Every fallible call returns a privgame_status;
// on failure privgame_last_error_message() describes the error for the
// calling thread. Infinite variances and costs are reported as +INFINITY.

#ifndef PRIVGAME_PRIVGAME_H_
#define PRIVGAME_PRIVGAME_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PRIVGAME_BUILDING_LIBRARY)
#define PRIVGAME_API __attribute__((visibility("default")))
#else
#define PRIVGAME_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum privgame_status {
  PRIVGAME_OK = 0,
  PRIVGAME_ERR_INVALID_ARGUMENT = 1,
  PRIVGAME_ERR_DOMAIN = 2,
  PRIVGAME_ERR_ESTIMATION_IMPOSSIBLE = 3,
  PRIVGAME_ERR_NOT_CONVERGED = 4,
  PRIVGAME_ERR_PRECONDITION = 5,
  PRIVGAME_ERR_BUFFER_TOO_SMALL = 6,
  PRIVGAME_ERR_INTERNAL = 7,
} privgame_status;

PRIVGAME_API const char* privgame_version(void);
PRIVGAME_API const char* privgame_status_name(privgame_status status);
// Message of the last failed call on this thread; "" if none.
PRIVGAME_API const char* privgame_last_error_message(void);

/* Costs */

typedef struct privgame_privacy_cost privgame_privacy_cost;
typedef struct privgame_estimation_cost privgame_estimation_cost;
typedef double (*privgame_fn)(double x, void* user);

PRIVGAME_API privgame_status privgame_privacy_cost_monomial(
    double c, double k, privgame_privacy_cost** out);
// value, derivative and second derivative of c; user is passed through.
PRIVGAME_API privgame_status privgame_privacy_cost_generic(
    privgame_fn value, privgame_fn derivative, privgame_fn second_derivative,
    void* user, privgame_privacy_cost** out);
PRIVGAME_API void privgame_privacy_cost_free(privgame_privacy_cost* cost);
PRIVGAME_API privgame_status privgame_privacy_cost_eval(
    const privgame_privacy_cost* cost, double sigma2, double lambda,
    double* value, double* derivative);

PRIVGAME_API privgame_status privgame_estimation_cost_linear(
    privgame_estimation_cost** out);
PRIVGAME_API privgame_status privgame_estimation_cost_generic(
    privgame_fn value, privgame_fn derivative, void* user,
    privgame_estimation_cost** out);
PRIVGAME_API void privgame_estimation_cost_free(privgame_estimation_cost* cost);
// min_variance is the floor sigma2 / n of the variance domain.
PRIVGAME_API privgame_status privgame_estimation_cost_eval(
    const privgame_estimation_cost* cost, double variance, double min_variance,
    double* value);

// *ok is 1 when every sampled assumption holds. The report text is written to
// summary (may be NULL) and its length plus terminator to *needed.
PRIVGAME_API privgame_status privgame_validate_assumptions(
    const privgame_privacy_cost* privacy,
    const privgame_estimation_cost* estimation, double sigma2, int samples,
    int* ok, char* summary, size_t capacity, size_t* needed);

/* Estimator. An estimation cost handle of NULL means F(v) = v. */

PRIVGAME_API privgame_status privgame_gls_mean(const double* lambda,
                                               const double* values, size_t n,
                                               double sigma2, double* mean);
PRIVGAME_API privgame_status privgame_estimator_variance(const double* lambda,
                                                         size_t n, double sigma2,
                                                         double* variance);
PRIVGAME_API privgame_status privgame_agent_cost(
    size_t agent, const double* lambda, size_t n, double sigma2,
    const privgame_privacy_cost* privacy,
    const privgame_estimation_cost* estimation, double* cost);

typedef enum privgame_noise {
  PRIVGAME_NOISE_GAUSSIAN = 0,
  PRIVGAME_NOISE_CENTERED_UNIFORM = 1,
} privgame_noise;

typedef struct privgame_mc_report {
  size_t trials;
  uint64_t seed;
  double empirical_bias;
  double empirical_variance;
  double theoretical_variance;
  double bias_standard_error;
  double variance_standard_error;
} privgame_mc_report;

PRIVGAME_API privgame_status privgame_monte_carlo(
    const double* lambda, size_t n, double sigma2, double true_mean,
    privgame_noise noise, size_t trials, uint64_t seed,
    privgame_mc_report* out);

/* Homogeneous game */

typedef struct privgame_hom_game privgame_hom_game;

PRIVGAME_API privgame_status privgame_hom_game_create(
    int n, double sigma2, const privgame_privacy_cost* privacy,
    const privgame_estimation_cost* estimation, privgame_hom_game** out);
PRIVGAME_API void privgame_hom_game_free(privgame_hom_game* game);
PRIVGAME_API privgame_status privgame_hom_game_set_eta(privgame_hom_game* game,
                                                       double eta);
PRIVGAME_API privgame_status privgame_hom_game_clear_eta(privgame_hom_game* game);
PRIVGAME_API privgame_status privgame_hom_game_validate(
    const privgame_hom_game* game);

typedef struct privgame_hom_equilibrium {
  int n;
  double lambda_star;  // NaN without full participation
  double variance;
  int at_cap;
  int full_participation;
  int iterations;
  double residual;
  int used_bisection;
} privgame_hom_equilibrium;

// Restricted game when an eta is set, unrestricted otherwise.
PRIVGAME_API privgame_status privgame_hom_solve(const privgame_hom_game* game,
                                                privgame_hom_equilibrium* out);
// Unrestricted equilibrium with n agents; ignores the game's n and eta.
PRIVGAME_API privgame_status privgame_hom_solve_count(
    const privgame_hom_game* game, int n, privgame_hom_equilibrium* out);

typedef struct privgame_min_precision {
  double eta_star;
  int at_cap;
  int iterations;
  double residual;
  int used_bisection;
} privgame_min_precision;

PRIVGAME_API privgame_status privgame_hom_eta_star(const privgame_hom_game* game,
                                                   int s,
                                                   privgame_min_precision* out);

PRIVGAME_API privgame_status privgame_hom_g(const privgame_hom_game* game, int n,
                                            double lambda, double* out);
PRIVGAME_API privgame_status privgame_hom_g_tilde(const privgame_hom_game* game,
                                                  int s, double eta,
                                                  double* out);

PRIVGAME_API privgame_status privgame_closed_form_lambda_star(int n, double c,
                                                              double k,
                                                              double sigma2,
                                                              double* out);
PRIVGAME_API privgame_status privgame_closed_form_eta_star(int n, double c,
                                                           double k,
                                                           double sigma2,
                                                           double* out);

typedef struct privgame_ratio {
  double finite;
  double asymptote;
  int uncapped;
} privgame_ratio;

PRIVGAME_API privgame_status privgame_improvement_ratio(int n, double c,
                                                        double k, double sigma2,
                                                        privgame_ratio* out);

typedef struct privgame_sweep_record {
  double parameter_value;
  double lambda_star;
  double eta_star;
  double variance_gamma;
  double variance_eta;
  double ratio;
  double asymptote;
  int boundary_flag;
  // Empty when the point solved; otherwise a truncated diagnostic.
  char diagnostic[192];
} privgame_sweep_record;

// Writes steps grid values; fails with BUFFER_TOO_SMALL when capacity < steps.
PRIVGAME_API privgame_status privgame_sweep_grid(double from, double to,
                                                 int steps, int log_scale,
                                                 double* out, size_t capacity);
// parameter is one of "n", "k", "c", "eta". out holds count records.
PRIVGAME_API privgame_status privgame_hom_sweep(const privgame_hom_game* game,
                                                const char* parameter,
                                                const double* grid,
                                                size_t count,
                                                privgame_sweep_record* out);

/* Heterogeneous game */

typedef struct privgame_het_game privgame_het_game;

PRIVGAME_API privgame_status privgame_het_game_create(
    double sigma2, const privgame_estimation_cost* estimation,
    privgame_het_game** out);
PRIVGAME_API void privgame_het_game_free(privgame_het_game* game);
PRIVGAME_API privgame_status privgame_het_game_add_agent(
    privgame_het_game* game, const privgame_privacy_cost* cost);
PRIVGAME_API size_t privgame_het_game_size(const privgame_het_game* game);
PRIVGAME_API privgame_status privgame_het_game_set_eta(privgame_het_game* game,
                                                       double eta);
PRIVGAME_API privgame_status privgame_het_game_clear_eta(privgame_het_game* game);
// mask has one entry per agent, nonzero for solicited; NULL solicits all.
PRIVGAME_API privgame_status privgame_het_game_set_solicited(
    privgame_het_game* game, const int* mask, size_t n);
PRIVGAME_API privgame_status privgame_het_game_validate(
    const privgame_het_game* game);

typedef struct privgame_het_summary {
  double variance;
  double potential;
  int full_participation;
  int ordering_ok;
  int sweeps;
  double max_change;
  double kkt_residual;
} privgame_het_summary;

// lambda and participation (may be NULL) need capacity >= size.
PRIVGAME_API privgame_status privgame_het_solve(const privgame_het_game* game,
                                                double* lambda,
                                                int* participation,
                                                size_t capacity,
                                                privgame_het_summary* out);
PRIVGAME_API privgame_status privgame_het_eta_star(const privgame_het_game* game,
                                                   privgame_min_precision* out);
PRIVGAME_API privgame_status privgame_het_closed_form_eta_star(
    const double* coefficients, size_t n, double k, double sigma2,
    double* out);
PRIVGAME_API privgame_status privgame_het_potential(
    const privgame_het_game* game, const double* lambda, size_t n, double* out);
PRIVGAME_API privgame_status privgame_het_check_ordering(
    const privgame_het_game* game, int* ordered, size_t* agent, double* at);

typedef struct privgame_entry_effect {
  double variance_before;
  double variance_after;
  int incumbents_weakly_decrease;
  int variance_weakly_decreases;
} privgame_entry_effect;

// before needs size entries, after size + 1; either may be NULL.
PRIVGAME_API privgame_status privgame_het_add_agent_effect(
    const privgame_het_game* game, const privgame_privacy_cost* new_cost,
    double* before, double* after, size_t capacity, privgame_entry_effect* out);

/* Two-stage game and analyst cost (monomial privacy, linear estimation) */

typedef struct privgame_two_stage_result {
  double eta;
  int participation_count;
  double precision;
  double variance;
  int unique;
  int in_full_participation_range;
  // Number of equilibrium counts found by the exhaustive search.
  size_t num_equilibrium_counts;
} privgame_two_stage_result;

// counts (may be NULL) receives up to capacity equilibrium counts.
PRIVGAME_API privgame_status privgame_two_stage(const privgame_hom_game* game,
                                                double eta,
                                                privgame_two_stage_result* out,
                                                int* counts, size_t capacity);
PRIVGAME_API privgame_status privgame_two_stage_participation_equilibria(
    const privgame_hom_game* game, double eta, int* counts, size_t capacity,
    size_t* found);
PRIVGAME_API privgame_status privgame_full_participation_stable(
    const privgame_hom_game* game, double eta, int* stable);
// participates has n entries (nonzero = participates); lambda receives n.
PRIVGAME_API privgame_status privgame_second_stage(
    const privgame_hom_game* game, const int* participates, size_t n,
    double eta, double* lambda, double* variance, int* degenerate);
PRIVGAME_API privgame_status privgame_reduced_first_stage_cost(
    const privgame_hom_game* game, const int* participates, size_t n,
    double eta, double* costs);

PRIVGAME_API privgame_status privgame_analyst_cost(const privgame_hom_game* game,
                                                   double per_agent_cost,
                                                   int n, double* out);

typedef struct privgame_agent_count {
  int n_star;
  double cost;
  int rule_verified;
  int scan_argmin;
  double scan_cost;
  int matches_scan;
} privgame_agent_count;

PRIVGAME_API privgame_status privgame_optimal_agent_count(
    const privgame_hom_game* game, double per_agent_cost, int n_max,
    privgame_agent_count* out);
// out[m-1] = J_A(m) for m = 1..n_max.
PRIVGAME_API privgame_status privgame_agent_count_scan(
    const privgame_hom_game* game, double per_agent_cost, int n_max,
    double* out, size_t capacity);

// *out = 1 when every value after the first strict increase also increases.
PRIVGAME_API privgame_status privgame_definitely_increasing(const double* values,
                                                            size_t n, int* out);

/* Oracle */

typedef struct privgame_strategy_set {
  double floor;
  double cap;
  int isolated_zero;
} privgame_strategy_set;

typedef struct privgame_deviation {
  size_t agent;
  double best_deviation;
  double candidate_cost;
  double best_cost;
  double improvement;
  int grid_points;
  int candidate_in_set;
} privgame_deviation;

// costs holds n handles, one per agent.
PRIVGAME_API privgame_status privgame_best_response_scan(
    size_t agent, const double* lambda, size_t n, double sigma2,
    const privgame_strategy_set* strategies, int grid_points,
    const privgame_privacy_cost* const* costs,
    const privgame_estimation_cost* estimation, privgame_deviation* out);
// num_sets is 1 (shared) or n. witness (may be NULL) is filled when refuted.
PRIVGAME_API privgame_status privgame_verify_nash(
    const double* lambda, size_t n, double sigma2,
    const privgame_strategy_set* strategies, size_t num_sets, int grid_points,
    double tolerance, const privgame_privacy_cost* const* costs,
    const privgame_estimation_cost* estimation, int* certified,
    privgame_deviation* witness);
PRIVGAME_API privgame_status privgame_potential_grid_argmin(
    const privgame_het_game* game, int grid_points, double* lambda,
    size_t capacity, double* potential, double* cell_width);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PRIVGAME_PRIVGAME_H_
