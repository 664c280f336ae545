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
#include "privgame/homogeneous.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privgame/fixed_point.h"
#include "privgame/parallel.h"
#include "privgame/status.h"

namespace privgame {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One-sided limit at 0 read off the sequence f(1e-4 h), f(1e-6 h), f(1e-8 h)
// with h = 1/sigma2. A sequence that has not settled is treated as diverging,
// which the min{., 1/sigma2} clamp turns into the cap.
double RightLimitAtZero(const std::function<double(double)>& f, double cap) {
  double previous = f(1e-4 * cap);
  double last = previous;
  for (double t : {1e-6, 1e-8}) {
    previous = last;
    last = f(t * cap);
  }
  if (std::isfinite(last) &&
      std::abs(last - previous) <= 1e-6 * std::max(1.0, std::abs(last))) {
    return last;
  }
  return cap;
}

double GUnclamped(const HomogeneousGameSpec& spec, int n, double lambda) {
  const double slope = spec.privacy.Derivative(lambda);
  if (slope <= 0.0) return std::numeric_limits<double>::infinity();
  const double marginal = spec.estimation.Derivative(1.0 / (n * lambda));
  return std::sqrt(marginal / (static_cast<double>(n) * n * slope));
}

double GTildeUnclamped(const HomogeneousGameSpec& spec, int s, double eta) {
  const double privacy = spec.privacy.Value(eta);
  const double gain = spec.estimation.Value(1.0 / ((s - 1) * eta)) -
                      spec.estimation.Value(1.0 / (s * eta));
  if (privacy <= 0.0) return std::numeric_limits<double>::infinity();
  return eta * gain / privacy;
}

double GAt(const HomogeneousGameSpec& spec, int n, double lambda) {
  const double cap = spec.cap();
  if (lambda > 0.0) return std::min(GUnclamped(spec, n, lambda), cap);
  if (spec.privacy.is_monomial()) return cap;  // c'(0) = 0 drives g to +inf
  return RightLimitAtZero(
      [&](double x) { return std::min(GUnclamped(spec, n, x), cap); }, cap);
}

double GTildeAt(const HomogeneousGameSpec& spec, int s, double eta) {
  const double cap = spec.cap();
  if (eta > 0.0) return std::min(GTildeUnclamped(spec, s, eta), cap);
  if (spec.privacy.is_monomial()) return cap;
  return RightLimitAtZero(
      [&](double x) { return std::min(GTildeUnclamped(spec, s, x), cap); },
      cap);
}

absl::Status CheckBasics(const HomogeneousGameSpec& spec) {
  if (spec.n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("agent count must be at least 1, got ", spec.n));
  }
  if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be positive, got ", spec.sigma2));
  }
  if (spec.eta.has_value() && !(*spec.eta >= 0.0 && *spec.eta <= spec.cap())) {
    return DomainError(absl::StrCat("minimum precision ", *spec.eta,
                                    " outside [0, ", spec.cap(), "]"));
  }
  return absl::OkStatus();
}

SolverDiagnostics ToDiagnostics(const FixedPointResult& r) {
  return {r.iterations, r.residual, r.used_bisection};
}

HomogeneousEquilibrium Symmetric(int n, double lambda, double cap,
                                 SolverDiagnostics diagnostics) {
  HomogeneousEquilibrium eq;
  eq.n = n;
  eq.lambda_star = lambda;
  eq.variance = 1.0 / (n * lambda);
  eq.at_cap = lambda >= cap;
  eq.diagnostics = diagnostics;
  return eq;
}

absl::Status CheckMonomialArgs(int n, double c, double k, double sigma2) {
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (!(c > 0.0)) return absl::InvalidArgumentError("c must be positive");
  if (!(k >= 2.0)) return absl::InvalidArgumentError("k must be at least 2");
  if (!(sigma2 > 0.0)) {
    return absl::InvalidArgumentError("sigma2 must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateSpec(const HomogeneousGameSpec& spec) {
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  auto report = ValidateAssumptions(spec.privacy, spec.estimation, spec.sigma2);
  if (!report.ok()) return report.status();
  if (!report->ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("cost assumptions violated:\n", report->Summary()));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GMap(const HomogeneousGameSpec& spec, int n,
                            double lambda) {
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (!(lambda >= 0.0 && lambda <= spec.cap())) {
    return DomainError(absl::StrCat("precision ", lambda, " outside [0, ",
                                    spec.cap(), "]"));
  }
  return GAt(spec, n, lambda);
}

absl::StatusOr<double> GTildeMap(const HomogeneousGameSpec& spec, int s,
                                 double eta) {
  if (absl::Status st = CheckBasics(spec); !st.ok()) return st;
  if (s < 2) return absl::InvalidArgumentError("g~ needs s >= 2");
  if (!(eta >= 0.0 && eta <= spec.cap())) {
    return DomainError(absl::StrCat("minimum precision ", eta, " outside [0, ",
                                    spec.cap(), "]"));
  }
  return GTildeAt(spec, s, eta);
}

absl::StatusOr<HomogeneousEquilibrium> EquilibriumForCount(
    const HomogeneousGameSpec& spec, int n) {
  HomogeneousGameSpec base = spec;
  base.n = n;
  base.eta.reset();
  if (absl::Status s = ValidateSpec(base); !s.ok()) return s;
  const double cap = spec.cap();
  if (GUnclamped(base, n, cap) >= cap) {
    return Symmetric(n, cap, cap, SolverDiagnostics{});
  }
  auto fp = SolveFixedPoint([&](double x) { return GAt(base, n, x); }, 0.0, cap,
                            0.5 * cap);
  if (!fp.ok()) return fp.status();
  return Symmetric(n, fp->x, cap, ToDiagnostics(*fp));
}

absl::StatusOr<HomogeneousEquilibrium> SolveUnrestricted(
    const HomogeneousGameSpec& spec) {
  if (spec.eta.has_value()) {
    return absl::InvalidArgumentError(
        "unrestricted game takes no minimum precision; use SolveRestricted");
  }
  return EquilibriumForCount(spec, spec.n);
}

absl::StatusOr<MinimumPrecision> OptimalMinimumPrecision(
    const HomogeneousGameSpec& spec, int s) {
  if (s < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("eta* needs at least 2 agents, got ", s));
  }
  HomogeneousGameSpec base = spec;
  base.n = s;
  base.eta.reset();
  if (absl::Status st = ValidateSpec(base); !st.ok()) return st;
  const double cap = spec.cap();
  MinimumPrecision out;
  if (GTildeUnclamped(base, s, cap) >= cap) {
    out.eta_star = cap;
    out.at_cap = true;
    return out;
  }
  auto fp = SolveFixedPoint([&](double x) { return GTildeAt(base, s, x); }, 0.0,
                            cap, 0.5 * cap);
  if (!fp.ok()) return fp.status();
  out.eta_star = fp->x;
  out.diagnostics = ToDiagnostics(*fp);
  return out;
}

absl::StatusOr<HomogeneousEquilibrium> SolveRestricted(
    const HomogeneousGameSpec& spec) {
  if (!spec.eta.has_value()) {
    return absl::InvalidArgumentError("restricted game needs a minimum precision");
  }
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  const double eta = *spec.eta;
  const double cap = spec.cap();
  auto free = EquilibriumForCount(spec, spec.n);
  if (!free.ok()) return free.status();

  // A lone agent always participates: withholding leaves the variance
  // infinite.
  if (spec.n == 1) {
    return Symmetric(1, std::max(free->lambda_star, eta), cap,
                     free->diagnostics);
  }
  // Truthful revelation already; the floor cannot bind above it.
  if (free->at_cap) return *free;
  if (eta <= free->lambda_star) return *free;

  auto floor = OptimalMinimumPrecision(spec, spec.n);
  if (!floor.ok()) return floor.status();
  if (eta <= floor->eta_star) {
    return Symmetric(spec.n, eta, cap, floor->diagnostics);
  }
  HomogeneousEquilibrium none;
  none.n = spec.n;
  none.lambda_star = kNaN;
  none.variance = kNaN;
  none.full_participation = false;
  none.diagnostics = floor->diagnostics;
  return none;
}

absl::StatusOr<double> ClosedFormLambdaStar(int n, double c, double k,
                                            double sigma2) {
  if (absl::Status s = CheckMonomialArgs(n, c, k, sigma2); !s.ok()) return s;
  const double nn = static_cast<double>(n);
  return std::min(std::pow(1.0 / (c * k * nn * nn), 1.0 / (k + 1.0)),
                  1.0 / sigma2);
}

absl::StatusOr<double> ClosedFormEtaStar(int n, double c, double k,
                                         double sigma2) {
  if (absl::Status s = CheckMonomialArgs(n, c, k, sigma2); !s.ok()) return s;
  if (n < 2) return DomainError("eta* is undefined for a single agent");
  const double nn = static_cast<double>(n);
  return std::min(std::pow(1.0 / (c * nn * (nn - 1.0)), 1.0 / (k + 1.0)),
                  1.0 / sigma2);
}

absl::StatusOr<MonomialClosedForm> ClosedFormMonomial(int n, double c,
                                                      double k, double sigma2) {
  auto lambda = ClosedFormLambdaStar(n, c, k, sigma2);
  if (!lambda.ok()) return lambda.status();
  auto eta = ClosedFormEtaStar(n, c, k, sigma2);
  if (!eta.ok()) return eta.status();
  return MonomialClosedForm{*lambda, *eta};
}

absl::StatusOr<ImprovementRatio> MonomialImprovementRatio(int n, double c,
                                                          double k,
                                                          double sigma2) {
  auto forms = ClosedFormMonomial(n, c, k, sigma2);
  if (!forms.ok()) return forms.status();
  ImprovementRatio ratio;
  ratio.asymptote = std::pow(k, 1.0 / (k + 1.0));
  const double cap = 1.0 / sigma2;
  ratio.uncapped = forms->lambda_star < cap && forms->eta_star < cap;
  if (ratio.uncapped) {
    const double nn = static_cast<double>(n);
    ratio.finite = std::pow(k * nn / (nn - 1.0), 1.0 / (k + 1.0));
  } else {
    // (1 / (n lambda*)) / (1 / (n eta*))
    ratio.finite = forms->eta_star / forms->lambda_star;
  }
  return ratio;
}

absl::StatusOr<SweepParameter> ParseSweepParameter(std::string_view name) {
  if (name == "n") return SweepParameter::kN;
  if (name == "k") return SweepParameter::kK;
  if (name == "c") return SweepParameter::kC;
  if (name == "eta") return SweepParameter::kEta;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown sweep parameter '", std::string(name), "' (n, k, c, eta)"));
}

std::string_view SweepParameterName(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kN:
      return "n";
    case SweepParameter::kK:
      return "k";
    case SweepParameter::kC:
      return "c";
    case SweepParameter::kEta:
      return "eta";
  }
  return "?";
}

absl::StatusOr<std::vector<double>> SweepGrid(double from, double to,
                                              int steps, bool log_scale) {
  if (steps < 1) return absl::InvalidArgumentError("steps must be positive");
  if (!std::isfinite(from) || !std::isfinite(to)) {
    return absl::InvalidArgumentError("sweep bounds must be finite");
  }
  if (log_scale && !(from > 0.0 && to > 0.0)) {
    return absl::InvalidArgumentError("log sweep needs positive bounds");
  }
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    grid[i] = log_scale
                  ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                  : from + t * (to - from);
  }
  grid.front() = from;
  grid.back() = steps == 1 ? from : to;
  return grid;
}

namespace {

SweepRecord SweepPoint(const HomogeneousGameSpec& base,
                       SweepParameter parameter, double value) {
  SweepRecord record;
  record.parameter_value = value;
  record.lambda_star = record.eta_star = record.variance_gamma =
      record.variance_eta = record.ratio = record.asymptote = kNaN;

  HomogeneousGameSpec spec = base;
  spec.eta.reset();
  switch (parameter) {
    case SweepParameter::kN:
      spec.n = static_cast<int>(std::lround(value));
      break;
    case SweepParameter::kK:
    case SweepParameter::kC: {
      const bool is_k = parameter == SweepParameter::kK;
      auto cost = PrivacyCost::Monomial(
          is_k ? spec.privacy.coefficient() : value,
          is_k ? value : spec.privacy.exponent());
      if (!cost.ok()) {
        record.diagnostic = std::string(cost.status().message());
        return record;
      }
      spec.privacy = *std::move(cost);
      break;
    }
    case SweepParameter::kEta:
      spec.eta = value;
      break;
  }
  if (spec.is_monomial_linear()) {
    const double k = spec.privacy.exponent();
    record.asymptote = std::pow(k, 1.0 / (k + 1.0));
  }

  auto free = EquilibriumForCount(spec, spec.n);
  if (!free.ok()) {
    record.diagnostic = std::string(free.status().message());
    return record;
  }
  record.lambda_star = free->lambda_star;
  record.variance_gamma = free->variance;
  record.boundary_flag = free->at_cap;
  if (spec.n < 2) {
    record.diagnostic = "eta* needs at least 2 agents";
    return record;
  }
  auto floor = OptimalMinimumPrecision(spec, spec.n);
  if (!floor.ok()) {
    record.diagnostic = std::string(floor.status().message());
    return record;
  }
  record.eta_star = floor->eta_star;
  record.boundary_flag = record.boundary_flag || floor->at_cap;

  if (parameter == SweepParameter::kEta) {
    auto restricted = SolveRestricted(spec);
    if (!restricted.ok()) {
      record.diagnostic = std::string(restricted.status().message());
      return record;
    }
    if (!restricted->full_participation) {
      record.diagnostic = "no full-participation equilibrium above eta*";
      return record;
    }
    record.variance_eta = restricted->variance;
  } else {
    record.variance_eta = 1.0 / (spec.n * floor->eta_star);
  }
  record.ratio = record.variance_gamma / record.variance_eta;
  return record;
}

}  // namespace

absl::StatusOr<std::vector<SweepRecord>> Sweep(const HomogeneousGameSpec& spec,
                                               SweepParameter parameter,
                                               std::span<const double> grid) {
  if (absl::Status s = CheckBasics(spec); !s.ok()) return s;
  if ((parameter == SweepParameter::kK || parameter == SweepParameter::kC) &&
      !spec.privacy.is_monomial()) {
    return absl::InvalidArgumentError(
        "k and c sweeps need a monomial privacy cost");
  }
  std::vector<SweepRecord> records(grid.size());
  ParallelFor(grid.size(), [&](std::size_t i) {
    records[i] = SweepPoint(spec, parameter, grid[i]);
  });
  return records;
}

}  // namespace privgame
