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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privgame/cost_model.h"
#include "privgame/estimator.h"
#include "privgame/extensions.h"
#include "privgame/heterogeneous.h"
#include "privgame/homogeneous.h"
#include "privgame/oracle.h"
#include "privgame/status.h"

struct privgame_privacy_cost {
  privgame::PrivacyCost cost;
};

struct privgame_estimation_cost {
  privgame::EstimationCost cost;
};

struct privgame_hom_game {
  privgame::HomogeneousGameSpec spec;
};

struct privgame_het_game {
  privgame::HeterogeneousGameSpec spec;
};

namespace {

using privgame::ExtendedReal;

thread_local std::string last_error;

privgame_status Fail(privgame_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

privgame_status FromStatus(const absl::Status& status) {
  if (status.ok()) return PRIVGAME_OK;
  privgame_status code = PRIVGAME_ERR_INTERNAL;
  switch (privgame::GetErrorKind(status)) {
    case privgame::ErrorKind::kEstimationImpossible:
      code = PRIVGAME_ERR_ESTIMATION_IMPOSSIBLE;
      break;
    case privgame::ErrorKind::kNotConverged:
      code = PRIVGAME_ERR_NOT_CONVERGED;
      break;
    case privgame::ErrorKind::kNone:
      switch (status.code()) {
        case absl::StatusCode::kInvalidArgument:
          code = PRIVGAME_ERR_INVALID_ARGUMENT;
          break;
        case absl::StatusCode::kOutOfRange:
          code = PRIVGAME_ERR_DOMAIN;
          break;
        case absl::StatusCode::kFailedPrecondition:
          code = PRIVGAME_ERR_PRECONDITION;
          break;
        default:
          break;
      }
      break;
  }
  return Fail(code, std::string(status.message()));
}

privgame_status NullArgument(const char* name) {
  return Fail(PRIVGAME_ERR_INVALID_ARGUMENT, absl::StrCat(name, " is NULL"));
}

privgame_status TooSmall(size_t capacity, size_t needed) {
  return Fail(PRIVGAME_ERR_BUFFER_TOO_SMALL,
              absl::StrCat("buffer holds ", capacity, ", need ", needed));
}

// Runs body, turning escaped exceptions into INTERNAL.
template <typename Body>
privgame_status Guard(Body&& body) {
  try {
    const privgame_status s = body();
    if (s == PRIVGAME_OK) last_error.clear();
    return s;
  } catch (const std::exception& e) {
    return Fail(PRIVGAME_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(PRIVGAME_ERR_INTERNAL, "unknown exception");
  }
}

double ToDouble(const ExtendedReal& x) { return x.value(); }

privgame::EstimationCost EstimationOrLinear(const privgame_estimation_cost* e) {
  return e == nullptr ? privgame::EstimationCost::Linear() : e->cost;
}

std::vector<bool> ToMask(const int* values, size_t n) {
  std::vector<bool> mask(n);
  for (size_t i = 0; i < n; ++i) mask[i] = values[i] != 0;
  return mask;
}

absl::StatusOr<privgame::PrecisionProfile> MakeProfile(const double* lambda,
                                                       size_t n, double sigma2) {
  if (lambda == nullptr && n > 0) {
    return absl::InvalidArgumentError("lambda is NULL");
  }
  return privgame::PrecisionProfile::Create(
      std::vector<double>(lambda, lambda + n), sigma2);
}

void Fill(const privgame::HomogeneousEquilibrium& eq,
          privgame_hom_equilibrium* out) {
  out->n = eq.n;
  out->lambda_star = eq.lambda_star;
  out->variance = eq.variance;
  out->at_cap = eq.at_cap;
  out->full_participation = eq.full_participation;
  out->iterations = eq.diagnostics.iterations;
  out->residual = eq.diagnostics.residual;
  out->used_bisection = eq.diagnostics.used_bisection;
}

void Fill(const privgame::DeviationScanResult& r, privgame_deviation* out) {
  out->agent = r.agent;
  out->best_deviation = r.best_deviation;
  out->candidate_cost = ToDouble(r.candidate_cost);
  out->best_cost = ToDouble(r.best_cost);
  out->improvement = r.improvement;
  out->grid_points = r.grid_points;
  out->candidate_in_set = r.candidate_in_set;
}

std::vector<privgame::PrivacyCost> CostList(
    const privgame_privacy_cost* const* costs, size_t n) {
  std::vector<privgame::PrivacyCost> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(costs[i]->cost);
  return out;
}

bool AnyNull(const privgame_privacy_cost* const* costs, size_t n) {
  if (costs == nullptr) return n > 0;
  for (size_t i = 0; i < n; ++i) {
    if (costs[i] == nullptr) return true;
  }
  return false;
}

privgame::AnalystCostSpec AnalystSpec(const privgame_hom_game* game, double C,
                                      int n_max) {
  privgame::AnalystCostSpec spec{C, n_max, game->spec};
  spec.game.eta.reset();
  return spec;
}

}  // namespace

extern "C" {

const char* privgame_version(void) { return "0.1.0"; }

const char* privgame_status_name(privgame_status status) {
  switch (status) {
    case PRIVGAME_OK: return "OK";
    case PRIVGAME_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case PRIVGAME_ERR_DOMAIN: return "DOMAIN";
    case PRIVGAME_ERR_ESTIMATION_IMPOSSIBLE: return "ESTIMATION_IMPOSSIBLE";
    case PRIVGAME_ERR_NOT_CONVERGED: return "NOT_CONVERGED";
    case PRIVGAME_ERR_PRECONDITION: return "PRECONDITION";
    case PRIVGAME_ERR_BUFFER_TOO_SMALL: return "BUFFER_TOO_SMALL";
    case PRIVGAME_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* privgame_last_error_message(void) { return last_error.c_str(); }

privgame_status privgame_privacy_cost_monomial(double c, double k,
                                               privgame_privacy_cost** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    auto cost = privgame::PrivacyCost::Monomial(c, k);
    if (!cost.ok()) return FromStatus(cost.status());
    *out = new privgame_privacy_cost{*std::move(cost)};
    return PRIVGAME_OK;
  });
}

privgame_status privgame_privacy_cost_generic(privgame_fn value,
                                              privgame_fn derivative,
                                              privgame_fn second_derivative,
                                              void* user,
                                              privgame_privacy_cost** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (value == nullptr || derivative == nullptr ||
        second_derivative == nullptr) {
      return NullArgument("cost callback");
    }
    auto cost = privgame::PrivacyCost::Generic(
        [value, user](double x) { return value(x, user); },
        [derivative, user](double x) { return derivative(x, user); },
        [second_derivative, user](double x) {
          return second_derivative(x, user);
        });
    if (!cost.ok()) return FromStatus(cost.status());
    *out = new privgame_privacy_cost{*std::move(cost)};
    return PRIVGAME_OK;
  });
}

void privgame_privacy_cost_free(privgame_privacy_cost* cost) { delete cost; }

privgame_status privgame_privacy_cost_eval(const privgame_privacy_cost* cost,
                                           double sigma2, double lambda,
                                           double* value, double* derivative) {
  return Guard([&] {
    if (cost == nullptr) return NullArgument("cost");
    auto r = privgame::EvaluatePrivacyCost(cost->cost, sigma2, lambda);
    if (!r.ok()) return FromStatus(r.status());
    if (value != nullptr) *value = r->value;
    if (derivative != nullptr) *derivative = r->derivative;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_estimation_cost_linear(privgame_estimation_cost** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    *out = new privgame_estimation_cost{privgame::EstimationCost::Linear()};
    return PRIVGAME_OK;
  });
}

privgame_status privgame_estimation_cost_generic(privgame_fn value,
                                                 privgame_fn derivative,
                                                 void* user,
                                                 privgame_estimation_cost** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (value == nullptr || derivative == nullptr) {
      return NullArgument("cost callback");
    }
    auto cost = privgame::EstimationCost::Generic(
        [value, user](double x) { return value(x, user); },
        [derivative, user](double x) { return derivative(x, user); });
    if (!cost.ok()) return FromStatus(cost.status());
    *out = new privgame_estimation_cost{*std::move(cost)};
    return PRIVGAME_OK;
  });
}

void privgame_estimation_cost_free(privgame_estimation_cost* cost) {
  delete cost;
}

privgame_status privgame_estimation_cost_eval(
    const privgame_estimation_cost* cost, double variance, double min_variance,
    double* value) {
  return Guard([&] {
    if (cost == nullptr) return NullArgument("cost");
    if (value == nullptr) return NullArgument("value");
    const ExtendedReal v = std::isinf(variance) && variance > 0
                               ? ExtendedReal::Infinite()
                               : ExtendedReal(variance);
    auto r = privgame::EvaluateEstimationCost(cost->cost, v, min_variance);
    if (!r.ok()) return FromStatus(r.status());
    *value = ToDouble(*r);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_validate_assumptions(
    const privgame_privacy_cost* privacy,
    const privgame_estimation_cost* estimation, double sigma2, int samples,
    int* ok, char* summary, size_t capacity, size_t* needed) {
  return Guard([&] {
    if (privacy == nullptr) return NullArgument("privacy");
    auto report = privgame::ValidateAssumptions(
        privacy->cost, EstimationOrLinear(estimation), sigma2, samples);
    if (!report.ok()) return FromStatus(report.status());
    if (ok != nullptr) *ok = report->ok();
    const std::string text = report->Summary();
    if (needed != nullptr) *needed = text.size() + 1;
    if (summary != nullptr) {
      if (capacity < text.size() + 1) return TooSmall(capacity, text.size() + 1);
      std::memcpy(summary, text.c_str(), text.size() + 1);
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_gls_mean(const double* lambda, const double* values,
                                  size_t n, double sigma2, double* mean) {
  return Guard([&] {
    if (mean == nullptr) return NullArgument("mean");
    if (values == nullptr && n > 0) return NullArgument("values");
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    auto m = privgame::GlsMean(*profile, std::span<const double>(values, n));
    if (!m.ok()) return FromStatus(m.status());
    *mean = *m;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_estimator_variance(const double* lambda, size_t n,
                                            double sigma2, double* variance) {
  return Guard([&] {
    if (variance == nullptr) return NullArgument("variance");
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    *variance = ToDouble(privgame::EstimatorVariance(*profile));
    return PRIVGAME_OK;
  });
}

privgame_status privgame_agent_cost(size_t agent, const double* lambda,
                                    size_t n, double sigma2,
                                    const privgame_privacy_cost* privacy,
                                    const privgame_estimation_cost* estimation,
                                    double* cost) {
  return Guard([&] {
    if (privacy == nullptr) return NullArgument("privacy");
    if (cost == nullptr) return NullArgument("cost");
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    auto j = privgame::AgentCost(agent, *profile, privacy->cost,
                                 EstimationOrLinear(estimation));
    if (!j.ok()) return FromStatus(j.status());
    *cost = ToDouble(*j);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_monte_carlo(const double* lambda, size_t n,
                                     double sigma2, double true_mean,
                                     privgame_noise noise, size_t trials,
                                     uint64_t seed, privgame_mc_report* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (noise != PRIVGAME_NOISE_GAUSSIAN &&
        noise != PRIVGAME_NOISE_CENTERED_UNIFORM) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT, "unknown noise distribution");
    }
    if (trials > static_cast<size_t>(std::numeric_limits<int64_t>::max())) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT, "too many trials");
    }
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    privgame::PopulationModel model{
        true_mean, sigma2,
        noise == PRIVGAME_NOISE_GAUSSIAN
            ? privgame::NoiseDistribution::kGaussian
            : privgame::NoiseDistribution::kCenteredUniform};
    auto r = privgame::SimulateEstimation(model, *profile,
                                          static_cast<int64_t>(trials), seed);
    if (!r.ok()) return FromStatus(r.status());
    out->trials = static_cast<size_t>(r->trials);
    out->seed = r->seed;
    out->empirical_bias = r->empirical_bias;
    out->empirical_variance = r->empirical_variance;
    out->theoretical_variance = r->theoretical_variance;
    out->bias_standard_error = r->bias_standard_error;
    out->variance_standard_error = r->variance_standard_error;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_game_create(
    int n, double sigma2, const privgame_privacy_cost* privacy,
    const privgame_estimation_cost* estimation, privgame_hom_game** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (privacy == nullptr) return NullArgument("privacy");
    if (n < 1) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT,
                  absl::StrCat("n must be >= 1, got ", n));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT,
                  absl::StrCat("sigma2 must be positive, got ", sigma2));
    }
    *out = new privgame_hom_game{privgame::HomogeneousGameSpec{
        n, sigma2, privacy->cost, EstimationOrLinear(estimation), std::nullopt}};
    return PRIVGAME_OK;
  });
}

void privgame_hom_game_free(privgame_hom_game* game) { delete game; }

privgame_status privgame_hom_game_set_eta(privgame_hom_game* game, double eta) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (!(eta >= 0.0 && eta <= game->spec.cap())) {
      return Fail(PRIVGAME_ERR_DOMAIN,
                  absl::StrCat("minimum precision ", eta, " outside [0, ",
                               game->spec.cap(), "]"));
    }
    game->spec.eta = eta;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_game_clear_eta(privgame_hom_game* game) {
  if (game == nullptr) return NullArgument("game");
  game->spec.eta.reset();
  last_error.clear();
  return PRIVGAME_OK;
}

privgame_status privgame_hom_game_validate(const privgame_hom_game* game) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    return FromStatus(privgame::ValidateSpec(game->spec));
  });
}

privgame_status privgame_hom_solve(const privgame_hom_game* game,
                                   privgame_hom_equilibrium* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto eq = game->spec.eta.has_value()
                  ? privgame::SolveRestricted(game->spec)
                  : privgame::SolveUnrestricted(game->spec);
    if (!eq.ok()) return FromStatus(eq.status());
    Fill(*eq, out);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_solve_count(const privgame_hom_game* game, int n,
                                         privgame_hom_equilibrium* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto eq = privgame::EquilibriumForCount(game->spec, n);
    if (!eq.ok()) return FromStatus(eq.status());
    Fill(*eq, out);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_eta_star(const privgame_hom_game* game, int s,
                                      privgame_min_precision* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::OptimalMinimumPrecision(game->spec, s);
    if (!r.ok()) return FromStatus(r.status());
    out->eta_star = r->eta_star;
    out->at_cap = r->at_cap;
    out->iterations = r->diagnostics.iterations;
    out->residual = r->diagnostics.residual;
    out->used_bisection = r->diagnostics.used_bisection;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_g(const privgame_hom_game* game, int n,
                               double lambda, double* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::GMap(game->spec, n, lambda);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_g_tilde(const privgame_hom_game* game, int s,
                                     double eta, double* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::GTildeMap(game->spec, s, eta);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_closed_form_lambda_star(int n, double c, double k,
                                                 double sigma2, double* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::ClosedFormLambdaStar(n, c, k, sigma2);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_closed_form_eta_star(int n, double c, double k,
                                              double sigma2, double* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::ClosedFormEtaStar(n, c, k, sigma2);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_improvement_ratio(int n, double c, double k,
                                           double sigma2, privgame_ratio* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::MonomialImprovementRatio(n, c, k, sigma2);
    if (!r.ok()) return FromStatus(r.status());
    out->finite = r->finite;
    out->asymptote = r->asymptote;
    out->uncapped = r->uncapped;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_sweep_grid(double from, double to, int steps,
                                    int log_scale, double* out,
                                    size_t capacity) {
  return Guard([&] {
    auto grid = privgame::SweepGrid(from, to, steps, log_scale != 0);
    if (!grid.ok()) return FromStatus(grid.status());
    if (out == nullptr) return NullArgument("out");
    if (capacity < grid->size()) return TooSmall(capacity, grid->size());
    std::copy(grid->begin(), grid->end(), out);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_hom_sweep(const privgame_hom_game* game,
                                   const char* parameter, const double* grid,
                                   size_t count, privgame_sweep_record* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (parameter == nullptr) return NullArgument("parameter");
    if (count > 0 && (grid == nullptr || out == nullptr)) {
      return NullArgument("grid or out");
    }
    auto which = privgame::ParseSweepParameter(parameter);
    if (!which.ok()) return FromStatus(which.status());
    auto records = privgame::Sweep(game->spec, *which,
                                   std::span<const double>(grid, count));
    if (!records.ok()) return FromStatus(records.status());
    for (size_t i = 0; i < records->size(); ++i) {
      const privgame::SweepRecord& r = (*records)[i];
      privgame_sweep_record& o = out[i];
      o.parameter_value = r.parameter_value;
      o.lambda_star = r.lambda_star;
      o.eta_star = r.eta_star;
      o.variance_gamma = r.variance_gamma;
      o.variance_eta = r.variance_eta;
      o.ratio = r.ratio;
      o.asymptote = r.asymptote;
      o.boundary_flag = r.boundary_flag;
      const size_t len = std::min(r.diagnostic.size(), sizeof(o.diagnostic) - 1);
      std::memcpy(o.diagnostic, r.diagnostic.data(), len);
      o.diagnostic[len] = '\0';
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_game_create(
    double sigma2, const privgame_estimation_cost* estimation,
    privgame_het_game** out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT,
                  absl::StrCat("sigma2 must be positive, got ", sigma2));
    }
    auto* game = new privgame_het_game{};
    game->spec.sigma2 = sigma2;
    game->spec.estimation = EstimationOrLinear(estimation);
    *out = game;
    return PRIVGAME_OK;
  });
}

void privgame_het_game_free(privgame_het_game* game) { delete game; }

privgame_status privgame_het_game_add_agent(privgame_het_game* game,
                                            const privgame_privacy_cost* cost) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (cost == nullptr) return NullArgument("cost");
    game->spec.costs.push_back(cost->cost);
    if (!game->spec.solicited.empty()) game->spec.solicited.push_back(true);
    return PRIVGAME_OK;
  });
}

size_t privgame_het_game_size(const privgame_het_game* game) {
  return game == nullptr ? 0 : game->spec.size();
}

privgame_status privgame_het_game_set_eta(privgame_het_game* game, double eta) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (!(eta >= 0.0 && eta <= game->spec.cap())) {
      return Fail(PRIVGAME_ERR_DOMAIN,
                  absl::StrCat("minimum precision ", eta, " outside [0, ",
                               game->spec.cap(), "]"));
    }
    game->spec.eta = eta;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_game_clear_eta(privgame_het_game* game) {
  if (game == nullptr) return NullArgument("game");
  game->spec.eta.reset();
  last_error.clear();
  return PRIVGAME_OK;
}

privgame_status privgame_het_game_set_solicited(privgame_het_game* game,
                                                const int* mask, size_t n) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (mask == nullptr) {
      game->spec.solicited.clear();
      return PRIVGAME_OK;
    }
    if (n != game->spec.size()) {
      return Fail(PRIVGAME_ERR_INVALID_ARGUMENT,
                  absl::StrCat("mask has ", n, " entries for ",
                               game->spec.size(), " agents"));
    }
    game->spec.solicited = ToMask(mask, n);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_game_validate(const privgame_het_game* game) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    return FromStatus(privgame::ValidateSpec(game->spec));
  });
}

privgame_status privgame_het_solve(const privgame_het_game* game,
                                   double* lambda, int* participation,
                                   size_t capacity, privgame_het_summary* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (lambda != nullptr || participation != nullptr) {
      if (capacity < game->spec.size()) {
        return TooSmall(capacity, game->spec.size());
      }
    }
    auto eq = game->spec.eta.has_value()
                  ? privgame::SolveRestricted(game->spec)
                  : privgame::SolveUnrestricted(game->spec);
    if (!eq.ok()) return FromStatus(eq.status());
    for (size_t i = 0; i < eq->lambda.size(); ++i) {
      if (lambda != nullptr) lambda[i] = eq->lambda[i];
      if (participation != nullptr) participation[i] = eq->participation[i];
    }
    if (out != nullptr) {
      out->variance = ToDouble(eq->variance);
      out->potential = ToDouble(eq->potential);
      out->full_participation = eq->full_participation;
      out->ordering_ok = eq->ordering_ok;
      out->sweeps = eq->diagnostics.sweeps;
      out->max_change = eq->diagnostics.max_change;
      out->kkt_residual = eq->diagnostics.kkt_residual;
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_eta_star(const privgame_het_game* game,
                                      privgame_min_precision* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::OptimalMinimumPrecision(game->spec);
    if (!r.ok()) return FromStatus(r.status());
    out->eta_star = r->eta_star;
    out->at_cap = r->at_cap;
    out->iterations = r->iterations;
    out->residual = r->residual;
    out->used_bisection = 1;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_closed_form_eta_star(const double* coefficients,
                                                  size_t n, double k,
                                                  double sigma2, double* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (coefficients == nullptr && n > 0) return NullArgument("coefficients");
    auto r = privgame::ClosedFormHeterogeneousEtaStar(
        std::span<const double>(coefficients, n), k, sigma2);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_potential(const privgame_het_game* game,
                                       const double* lambda, size_t n,
                                       double* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    if (lambda == nullptr && n > 0) return NullArgument("lambda");
    auto r = privgame::Potential(game->spec, std::span<const double>(lambda, n));
    if (!r.ok()) return FromStatus(r.status());
    *out = ToDouble(*r);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_check_ordering(const privgame_het_game* game,
                                            int* ordered, size_t* agent,
                                            double* at) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    const privgame::OrderingReport r = privgame::CheckCostOrdering(game->spec);
    if (ordered != nullptr) *ordered = r.ordered;
    if (agent != nullptr) *agent = r.agent.value_or(0);
    if (at != nullptr) *at = r.at.value_or(0.0);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_het_add_agent_effect(const privgame_het_game* game,
                                              const privgame_privacy_cost* new_cost,
                                              double* before, double* after,
                                              size_t capacity,
                                              privgame_entry_effect* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (new_cost == nullptr) return NullArgument("new_cost");
    const size_t n = game->spec.size();
    if (after != nullptr && capacity < n + 1) return TooSmall(capacity, n + 1);
    if (before != nullptr && capacity < n) return TooSmall(capacity, n);
    auto r = privgame::AddAgentEffect(game->spec, new_cost->cost);
    if (!r.ok()) return FromStatus(r.status());
    if (before != nullptr) std::copy(r->before.begin(), r->before.end(), before);
    if (after != nullptr) std::copy(r->after.begin(), r->after.end(), after);
    if (out != nullptr) {
      out->variance_before = ToDouble(r->variance_before);
      out->variance_after = ToDouble(r->variance_after);
      out->incumbents_weakly_decrease = r->incumbents_weakly_decrease;
      out->variance_weakly_decreases = r->variance_weakly_decreases;
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_two_stage(const privgame_hom_game* game, double eta,
                                   privgame_two_stage_result* out, int* counts,
                                   size_t capacity) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::TwoStageEquilibrium(eta, game->spec);
    if (!r.ok()) return FromStatus(r.status());
    out->eta = r->eta;
    out->participation_count = r->participation_count;
    out->precision = r->precision;
    out->variance = ToDouble(r->variance);
    out->unique = r->unique;
    out->in_full_participation_range = r->in_full_participation_range;
    out->num_equilibrium_counts = r->equilibrium_counts.size();
    if (counts != nullptr) {
      const size_t m = std::min(capacity, r->equilibrium_counts.size());
      std::copy_n(r->equilibrium_counts.begin(), m, counts);
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_two_stage_participation_equilibria(
    const privgame_hom_game* game, double eta, int* counts, size_t capacity,
    size_t* found) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    auto r = privgame::ParticipationEquilibria(eta, game->spec);
    if (!r.ok()) return FromStatus(r.status());
    if (found != nullptr) *found = r->size();
    if (counts != nullptr) {
      if (capacity < r->size()) return TooSmall(capacity, r->size());
      std::copy(r->begin(), r->end(), counts);
    }
    return PRIVGAME_OK;
  });
}

privgame_status privgame_full_participation_stable(const privgame_hom_game* game,
                                                   double eta, int* stable) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (stable == nullptr) return NullArgument("stable");
    auto r = privgame::FullParticipationStable(eta, game->spec);
    if (!r.ok()) return FromStatus(r.status());
    *stable = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_second_stage(const privgame_hom_game* game,
                                      const int* participates, size_t n,
                                      double eta, double* lambda,
                                      double* variance, int* degenerate) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (participates == nullptr && n > 0) return NullArgument("participates");
    auto r = privgame::SecondStageEquilibrium(
        privgame::ParticipationProfile{ToMask(participates, n)}, eta,
        game->spec);
    if (!r.ok()) return FromStatus(r.status());
    if (lambda != nullptr) std::copy(r->lambda.begin(), r->lambda.end(), lambda);
    if (variance != nullptr) *variance = ToDouble(r->variance);
    if (degenerate != nullptr) *degenerate = r->degenerate;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_reduced_first_stage_cost(const privgame_hom_game* game,
                                                  const int* participates,
                                                  size_t n, double eta,
                                                  double* costs) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (costs == nullptr) return NullArgument("costs");
    if (participates == nullptr && n > 0) return NullArgument("participates");
    auto r = privgame::ReducedFirstStageCost(
        privgame::ParticipationProfile{ToMask(participates, n)}, eta,
        game->spec);
    if (!r.ok()) return FromStatus(r.status());
    for (size_t i = 0; i < r->size(); ++i) costs[i] = ToDouble((*r)[i]);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_analyst_cost(const privgame_hom_game* game,
                                      double per_agent_cost, int n,
                                      double* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    const privgame::AnalystCostSpec spec =
        AnalystSpec(game, per_agent_cost, std::max(n, 1));
    if (absl::Status s = privgame::ValidateSpec(spec); !s.ok()) {
      return FromStatus(s);
    }
    auto r = privgame::AnalystCost(n, spec);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_optimal_agent_count(const privgame_hom_game* game,
                                             double per_agent_cost, int n_max,
                                             privgame_agent_count* out) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    auto r = privgame::OptimalAgentCount(AnalystSpec(game, per_agent_cost, n_max));
    if (!r.ok()) return FromStatus(r.status());
    out->n_star = r->n_star;
    out->cost = r->cost;
    out->rule_verified = r->rule_verified;
    out->scan_argmin = r->scan_argmin;
    out->scan_cost = r->scan_cost;
    out->matches_scan = r->matches_scan;
    return PRIVGAME_OK;
  });
}

privgame_status privgame_agent_count_scan(const privgame_hom_game* game,
                                          double per_agent_cost, int n_max,
                                          double* out, size_t capacity) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (out == nullptr) return NullArgument("out");
    if (n_max > 0 && capacity < static_cast<size_t>(n_max)) {
      return TooSmall(capacity, static_cast<size_t>(n_max));
    }
    auto r = privgame::ExhaustiveAgentCountScan(
        AnalystSpec(game, per_agent_cost, n_max));
    if (!r.ok()) return FromStatus(r.status());
    std::copy(r->begin(), r->end(), out);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_definitely_increasing(const double* values,
                                               size_t n, int* out) {
  return Guard([&] {
    if (out == nullptr) return NullArgument("out");
    if (values == nullptr && n > 0) return NullArgument("values");
    *out = privgame::DefinitelyIncreasing(std::span<const double>(values, n));
    return PRIVGAME_OK;
  });
}

privgame_status privgame_best_response_scan(
    size_t agent, const double* lambda, size_t n, double sigma2,
    const privgame_strategy_set* strategies, int grid_points,
    const privgame_privacy_cost* const* costs,
    const privgame_estimation_cost* estimation, privgame_deviation* out) {
  return Guard([&] {
    if (strategies == nullptr) return NullArgument("strategies");
    if (out == nullptr) return NullArgument("out");
    if (AnyNull(costs, n)) return NullArgument("costs");
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    const privgame::StrategySet set{strategies->floor, strategies->cap,
                                    strategies->isolated_zero != 0};
    const auto cost_list = CostList(costs, n);
    auto r = privgame::BestResponseScan(agent, *profile, set, grid_points,
                                        cost_list, EstimationOrLinear(estimation));
    if (!r.ok()) return FromStatus(r.status());
    Fill(*r, out);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_verify_nash(
    const double* lambda, size_t n, double sigma2,
    const privgame_strategy_set* strategies, size_t num_sets, int grid_points,
    double tolerance, const privgame_privacy_cost* const* costs,
    const privgame_estimation_cost* estimation, int* certified,
    privgame_deviation* witness) {
  return Guard([&] {
    if (strategies == nullptr) return NullArgument("strategies");
    if (certified == nullptr) return NullArgument("certified");
    if (AnyNull(costs, n)) return NullArgument("costs");
    auto profile = MakeProfile(lambda, n, sigma2);
    if (!profile.ok()) return FromStatus(profile.status());
    std::vector<privgame::StrategySet> sets;
    for (size_t i = 0; i < num_sets; ++i) {
      sets.push_back({strategies[i].floor, strategies[i].cap,
                      strategies[i].isolated_zero != 0});
    }
    const auto cost_list = CostList(costs, n);
    auto v = privgame::VerifyNash(*profile, sets, grid_points, tolerance,
                                  cost_list, EstimationOrLinear(estimation));
    if (!v.ok()) return FromStatus(v.status());
    *certified = v->certified;
    if (witness != nullptr && v->witness.has_value()) Fill(*v->witness, witness);
    return PRIVGAME_OK;
  });
}

privgame_status privgame_potential_grid_argmin(const privgame_het_game* game,
                                               int grid_points, double* lambda,
                                               size_t capacity,
                                               double* potential,
                                               double* cell_width) {
  return Guard([&] {
    if (game == nullptr) return NullArgument("game");
    if (lambda == nullptr) return NullArgument("lambda");
    if (capacity < game->spec.size()) {
      return TooSmall(capacity, game->spec.size());
    }
    auto r = privgame::PotentialGridArgmin(game->spec, grid_points);
    if (!r.ok()) return FromStatus(r.status());
    std::copy(r->lambda.begin(), r->lambda.end(), lambda);
    if (potential != nullptr) *potential = ToDouble(r->potential);
    if (cell_width != nullptr) *cell_width = r->cell_width;
    return PRIVGAME_OK;
  });
}

}  // extern "C"
