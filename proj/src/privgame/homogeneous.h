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
#ifndef PRIVGAME_HOMOGENEOUS_H_
#define PRIVGAME_HOMOGENEOUS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgame/cost_model.h"

namespace privgame {

// n agents sharing one privacy cost. When eta is set the game is the
// minimum-precision variant: each agent picks 0 or a precision in
// [eta, 1/sigma2].
struct HomogeneousGameSpec {
  int n = 1;
  double sigma2 = 1.0;
  PrivacyCost privacy;
  EstimationCost estimation = EstimationCost::Linear();
  std::optional<double> eta;

  double cap() const { return 1.0 / sigma2; }
  bool is_monomial_linear() const {
    return privacy.is_monomial() && estimation.is_linear();
  }
};

// Checks ranges and runs ValidateAssumptions on the cost pair.
absl::Status ValidateSpec(const HomogeneousGameSpec& spec);

struct SolverDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool used_bisection = false;
};

struct HomogeneousEquilibrium {
  int n = 0;
  // Common precision; NaN when no full-participation equilibrium exists.
  double lambda_star = 0.0;
  // 1 / (n lambda_star); NaN alongside lambda_star.
  double variance = 0.0;
  bool at_cap = false;
  bool full_participation = true;
  SolverDiagnostics diagnostics;
};

// g(n, lambda) = min{ sqrt(F'(1/(n lambda)) / (n^2 c'(lambda))), 1/sigma2 }
// extended to lambda = 0 by its right limit. Its fixed point is lambda*(n).
absl::StatusOr<double> GMap(const HomogeneousGameSpec& spec, int n,
                            double lambda);

// g~(s, eta) = min{ eta (F(1/((s-1) eta)) - F(1/(s eta))) / c(eta), 1/sigma2 },
// extended to eta = 0 by its right limit. Its fixed point is eta*(s).
absl::StatusOr<double> GTildeMap(const HomogeneousGameSpec& spec, int s,
                                 double eta);

// Unique symmetric equilibrium of the unrestricted game with spec.n agents.
// spec.eta must be unset.
absl::StatusOr<HomogeneousEquilibrium> SolveUnrestricted(
    const HomogeneousGameSpec& spec);

// Same, for an arbitrary agent count; spec.n and spec.eta are ignored.
absl::StatusOr<HomogeneousEquilibrium> EquilibriumForCount(
    const HomogeneousGameSpec& spec, int n);

struct MinimumPrecision {
  double eta_star = 0.0;
  bool at_cap = false;
  SolverDiagnostics diagnostics;
};

// eta*(s): the largest floor at which all s agents still participate.
// Requires s >= 2.
absl::StatusOr<MinimumPrecision> OptimalMinimumPrecision(
    const HomogeneousGameSpec& spec, int s);

// Equilibrium of the minimum-precision game with s = spec.n solicited agents
// and floor *spec.eta. Above eta*(s) full_participation is false.
absl::StatusOr<HomogeneousEquilibrium> SolveRestricted(
    const HomogeneousGameSpec& spec);

// Closed forms for c(lambda) = c lambda^k with linear F.
absl::StatusOr<double> ClosedFormLambdaStar(int n, double c, double k,
                                            double sigma2);
// Domain error for n < 2.
absl::StatusOr<double> ClosedFormEtaStar(int n, double c, double k,
                                         double sigma2);

struct MonomialClosedForm {
  double lambda_star = 0.0;
  double eta_star = 0.0;
};
absl::StatusOr<MonomialClosedForm> ClosedFormMonomial(int n, double c,
                                                      double k, double sigma2);

struct ImprovementRatio {
  // variance without floor / variance at the optimal floor.
  double finite = 0.0;
  // k^(1/(k+1)), the n -> infinity limit.
  double asymptote = 0.0;
  // False when a cap binds and the ratio came from the capped variances.
  bool uncapped = true;
};
absl::StatusOr<ImprovementRatio> MonomialImprovementRatio(int n, double c,
                                                          double k,
                                                          double sigma2);

enum class SweepParameter { kN, kK, kC, kEta };

absl::StatusOr<SweepParameter> ParseSweepParameter(std::string_view name);
std::string_view SweepParameterName(SweepParameter parameter);

struct SweepRecord {
  double parameter_value = 0.0;
  double lambda_star = 0.0;
  double eta_star = 0.0;
  double variance_gamma = 0.0;
  double variance_eta = 0.0;
  double ratio = 0.0;
  double asymptote = 0.0;
  bool boundary_flag = false;
  // Empty when the point solved cleanly; NaN fields accompany a message.
  std::string diagnostic;
};

// Evenly spaced (or log-spaced) grid with both endpoints included.
absl::StatusOr<std::vector<double>> SweepGrid(double from, double to,
                                              int steps, bool log_scale);

// Solves one instance per grid value. A failing point records its diagnostic
// and the sweep carries on. k and c sweeps need a monomial privacy cost.
// Points are solved in parallel; records come back in grid order.
absl::StatusOr<std::vector<SweepRecord>> Sweep(const HomogeneousGameSpec& spec,
                                               SweepParameter parameter,
                                               std::span<const double> grid);

}  // namespace privgame

#endif  // PRIVGAME_HOMOGENEOUS_H_
