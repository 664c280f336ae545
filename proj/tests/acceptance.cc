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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privgame/estimator.h"
#include "privgame/extensions.h"
#include "privgame/heterogeneous.h"
#include "privgame/homogeneous.h"
#include "privgame/oracle.h"
#include "test_util.h"

namespace privgame {
namespace {

using testing::EtaStar;
using testing::Het;
using testing::Hom;
using testing::LambdaStar;
using testing::Mono;

// Collects failed clauses; a criterion passes when none were recorded.
class Clauses {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  template <typename T>
  bool Ok(const absl::StatusOr<T>& s, const std::string& what) {
    if (s.ok()) return true;
    failures_.push_back(absl::StrCat(what, ": ", s.status().ToString()));
    return false;
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Clauses&)> body;
};

PrecisionProfile Profile(std::vector<double> lambda, double sigma2) {
  return *PrecisionProfile::Create(std::move(lambda), sigma2);
}

std::string Fmt(double x) { return absl::StrCat(x); }

void ClosedFormAgreement(Clauses& t) {
  for (double c : {0.1, 1.0, 10.0}) {
    for (double k : {2.0, 3.0, 5.0}) {
      for (int n : {1, 2, 10, 100}) {
        const std::string at = absl::StrCat("c=", c, " k=", k, " n=", n);
        const HomogeneousGameSpec spec = Hom(n, c, k, 0.1);
        auto eq = SolveUnrestricted(spec);
        if (t.Ok(eq, "lambda* " + at)) {
          const double d = std::abs(eq->lambda_star - LambdaStar(n, c, k));
          t.Expect(d <= 1e-8, "lambda* " + at + " off by " + Fmt(d));
        }
        if (n < 2) continue;
        auto mp = OptimalMinimumPrecision(spec, n);
        if (t.Ok(mp, "eta* " + at)) {
          const double d = std::abs(mp->eta_star - EtaStar(n, c, k));
          t.Expect(d <= 1e-8, "eta* " + at + " off by " + Fmt(d));
        }
      }
    }
  }
}

void ImprovementRatioCriterion(Clauses& t) {
  for (int k = 2; k <= 10; ++k) {
    const HomogeneousGameSpec spec = Hom(10, 1.0, k, 0.1);
    auto free_eq = SolveUnrestricted(spec);
    auto mp = OptimalMinimumPrecision(spec, 10);
    if (!t.Ok(free_eq, "solve") || !t.Ok(mp, "eta*")) continue;
    HomogeneousGameSpec restricted = spec;
    restricted.eta = mp->eta_star;
    auto eq = SolveRestricted(restricted);
    if (!t.Ok(eq, "restricted")) continue;
    const double ratio = free_eq->variance / eq->variance;
    const double expected = std::pow(k * 10.0 / 9.0, 1.0 / (k + 1.0));
    t.Expect(std::abs(ratio - expected) <= 1e-8,
             absl::StrCat("ratio k=", k, " ", ratio, " vs ", expected));
    auto r = MonomialImprovementRatio(10, 1.0, k, 0.1);
    if (!t.Ok(r, "ratio")) continue;
    t.Expect(r->asymptote >= 1.23 && r->asymptote <= 1.32,
             absl::StrCat("asymptote k=", k, " = ", r->asymptote));
    t.Expect(ratio > r->asymptote, absl::StrCat("not above asymptote k=", k));
  }
  auto r2 = MonomialImprovementRatio(10, 1.0, 2.0, 0.1);
  if (t.Ok(r2, "ratio k=2")) {
    t.Expect(std::abs(r2->asymptote - std::cbrt(2.0)) <= 1e-9 &&
                 std::abs(r2->asymptote - 1.259921) <= 1e-6,
             "asymptote at k=2 = " + Fmt(r2->asymptote));
  }
}

// Instances shared by criteria 3 and 7.
struct RandomInstance {
  HeterogeneousGameSpec spec;
  bool homogeneous = false;
};

std::vector<RandomInstance> RandomInstances() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> n_dist(1, 6);
  std::uniform_real_distribution<double> log_c(std::log(0.1), std::log(10.0));
  const double ks[] = {2, 3, 5};
  std::vector<RandomInstance> out;
  for (int i = 0; i < 100; ++i) {
    const int n = n_dist(rng);
    const double k = ks[i % 3];
    RandomInstance inst;
    inst.homogeneous = i % 2 == 0;
    std::vector<double> c(n);
    const double shared = std::exp(log_c(rng));
    for (double& ci : c) ci = inst.homogeneous ? shared : std::exp(log_c(rng));
    inst.spec = Het(c, k, 0.1);
    out.push_back(std::move(inst));
  }
  return out;
}

absl::StatusOr<std::vector<double>> SolveInstance(const RandomInstance& inst) {
  if (inst.homogeneous) {
    HomogeneousGameSpec spec{static_cast<int>(inst.spec.size()),
                             inst.spec.sigma2, inst.spec.costs[0],
                             EstimationCost::Linear(), std::nullopt};
    auto eq = SolveUnrestricted(spec);
    if (!eq.ok()) return eq.status();
    return std::vector<double>(inst.spec.size(), eq->lambda_star);
  }
  auto eq = SolveUnrestricted(inst.spec);
  if (!eq.ok()) return eq.status();
  return eq->lambda;
}

void OracleCertification(Clauses& t) {
  std::mt19937_64 rng(7);
  const std::vector<StrategySet> box = {StrategySet::Box(10.0)};
  const auto instances = RandomInstances();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const std::string at = absl::StrCat("instance ", i);
    auto lambda = SolveInstance(inst);
    if (!t.Ok(lambda, at)) continue;
    auto v = VerifyNash(Profile(*lambda, 0.1), box, 2001, 1e-9, inst.spec.costs,
                        inst.spec.estimation);
    if (!t.Ok(v, at)) continue;
    t.Expect(v->certified, at + " not certified");

    std::vector<double> shifted = *lambda;
    std::uniform_int_distribution<std::size_t> pick(0, shifted.size() - 1);
    const std::size_t j = pick(rng);
    shifted[j] += shifted[j] + 0.05 <= 10.0 ? 0.05 : -0.05;
    auto w = VerifyNash(Profile(shifted, 0.1), box, 2001, 1e-9, inst.spec.costs,
                        inst.spec.estimation);
    if (!t.Ok(w, at)) continue;
    t.Expect(!w->certified, at + " perturbed profile certified");
  }
}

void BoundaryBehaviour(Clauses& t) {
  const HomogeneousGameSpec base = Hom(10, 1, 2, 0.1);
  HomogeneousGameSpec spec = base;
  spec.eta = 0.20;
  auto at_020 = SolveRestricted(spec);
  if (t.Ok(at_020, "eta=0.20")) {
    t.Expect(at_020->full_participation && at_020->lambda_star == 0.20,
             "eta=0.20 gives " + Fmt(at_020->lambda_star));
  }
  const double high = 0.223144 + 1e-3;
  const std::vector<StrategySet> sets = {StrategySet::WithFloor(high, 10.0)};
  auto v = VerifyNash(Profile(std::vector<double>(10, high), 0.1), sets, 2001,
                      1e-9, std::vector<PrivacyCost>(10, Mono(1, 2)),
                      EstimationCost::Linear());
  if (t.Ok(v, "eta above eta*")) {
    t.Expect(!v->certified && v->witness.has_value() &&
                 v->witness->best_deviation == 0.0,
             "no profitable deviation to 0 above eta*");
  }
  spec.eta = 0.10;
  auto at_010 = SolveRestricted(spec);
  if (t.Ok(at_010, "eta=0.10")) {
    t.Expect(std::abs(at_010->lambda_star - LambdaStar(10, 1, 2)) <= 1e-10,
             "eta=0.10 gives " + Fmt(at_010->lambda_star));
  }
}

void Monotonicity(Clauses& t) {
  const HomogeneousGameSpec spec = Hom(1, 1, 2, 0.1);
  double prev_lambda = INFINITY;
  double prev_variance = INFINITY;
  for (int n = 1; n <= 1000; ++n) {
    auto eq = EquilibriumForCount(spec, n);
    if (!t.Ok(eq, absl::StrCat("n=", n))) return;
    t.Expect(eq->lambda_star <= prev_lambda, absl::StrCat("lambda* rises at n=", n));
    t.Expect(eq->variance <= prev_variance, absl::StrCat("variance rises at n=", n));
    prev_lambda = eq->lambda_star;
    prev_variance = eq->variance;
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> n_dist(1, 6);
  std::uniform_real_distribution<double> log_c(std::log(0.1), std::log(10.0));
  const double ks[] = {2, 3, 5};
  for (int i = 0; i < 100; ++i) {
    std::vector<double> c(n_dist(rng));
    for (double& ci : c) ci = std::exp(log_c(rng));
    const double k = ks[i % 3];
    auto effect = AddAgentEffect(Het(c, k, 0.1), Mono(std::exp(log_c(rng)), k));
    if (!t.Ok(effect, absl::StrCat("entry ", i))) continue;
    t.Expect(effect->incumbents_weakly_decrease,
             absl::StrCat("entry ", i, " raised an incumbent"));
    t.Expect(effect->variance_weakly_decreases,
             absl::StrCat("entry ", i, " raised the variance"));
  }
}

void HeterogeneousWitness(Clauses& t) {
  const HeterogeneousGameSpec spec = Het({1, 2}, 2, 0.1);
  auto eq = SolveUnrestricted(spec);
  if (!t.Ok(eq, "solve")) return;
  t.Expect(std::abs(eq->lambda[0] - 0.605707) <= 1e-6 &&
               std::abs(eq->lambda[1] - 0.302853) <= 1e-6,
           absl::StrCat("lambda = (", eq->lambda[0], ", ", eq->lambda[1], ")"));
  // Lambda^3 = sum 1/(2 c_i), lambda_i = 1/(2 c_i Lambda^2).
  const double total = std::cbrt(0.5 + 0.25);
  for (int i = 0; i < 2; ++i) {
    const double built = 1.0 / (2.0 * (i + 1) * total * total);
    t.Expect(std::abs(eq->lambda[i] - built) <= 1e-9,
             absl::StrCat("construction mismatch at agent ", i));
  }
  const std::vector<StrategySet> box = {StrategySet::Box(10.0)};
  auto v = VerifyNash(Profile(eq->lambda, 0.1), box, 2001, 1e-9, spec.costs,
                      spec.estimation);
  if (t.Ok(v, "verify")) t.Expect(v->certified, "oracle refuted the witness");
  auto grid = PotentialGridArgmin(spec, 400);
  if (t.Ok(grid, "potential grid")) {
    for (int i = 0; i < 2; ++i) {
      t.Expect(std::abs(grid->lambda[i] - eq->lambda[i]) <= grid->cell_width,
               absl::StrCat("grid argmin off by more than a cell at agent ", i));
    }
  }
}

void StrictImprovement(Clauses& t) {
  const auto instances = RandomInstances();
  int checked = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.spec.size() < 2) continue;
    const std::string at = absl::StrCat("instance ", i);
    auto free_eq = SolveUnrestricted(inst.spec);
    if (!t.Ok(free_eq, at)) continue;
    bool interior = true;
    for (double l : free_eq->lambda) interior &= l > 0.0 && l < inst.spec.cap();
    if (!interior) continue;
    auto mp = OptimalMinimumPrecision(inst.spec);
    if (!t.Ok(mp, at + " eta*")) continue;
    HeterogeneousGameSpec restricted = inst.spec;
    restricted.eta = mp->eta_star;
    auto eq = SolveRestricted(restricted);
    if (!t.Ok(eq, at + " restricted")) continue;
    const double margin = free_eq->variance.value() - eq->variance.value();
    t.Expect(eq->full_participation, at + " lost participation at eta*");
    t.Expect(margin > 1e-6, at + " margin " + Fmt(margin));
    ++checked;
  }
  t.Expect(checked > 0, "no interior instances");
}

void TwoStage(Clauses& t) {
  const HomogeneousGameSpec spec = Hom(10, 1, 2, 0.1);
  int non_unique = 0;
  std::string counts_text;
  for (int i = 0; i < 20; ++i) {
    const double eta = 0.18344 + (0.22314 - 0.18344) * i / 19.0;
    auto counts = ParticipationEquilibria(eta, spec);
    auto r = TwoStageEquilibrium(eta, spec);
    if (!t.Ok(counts, "counts") || !t.Ok(r, "two-stage")) continue;
    t.Expect(r->participation_count == 10 && r->precision == std::max(eta, LambdaStar(10, 1, 2)),
             "outcome is not full participation at eta=" + Fmt(eta));
    if (*counts != std::vector<int>{10} || !r->unique) {
      if (non_unique++ == 0) {
        for (int p : *counts) absl::StrAppend(&counts_text, counts_text.empty() ? "" : ",", p);
      }
    }
  }
  t.Expect(non_unique == 0,
           absl::StrCat("full participation not the unique equilibrium at ", non_unique,
                        "/20 points; equilibrium counts {", counts_text, "}"));

  // Grid over [0, 0.4] with step 1e-4.
  std::vector<double> etas;
  for (int i = 0; i <= 4000; ++i) etas.push_back(i * 1e-4);
  auto scan = TwoStageEtaScan(spec, etas);
  if (t.Ok(scan, "eta scan")) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan->size(); ++i) {
      if ((*scan)[i].variance < (*scan)[best].variance) best = i;
    }
    const double eta_star = EtaStar(10, 1, 2);
    t.Expect(std::abs(etas[best] - eta_star) <= 1e-4,
             "grid argmin " + Fmt(etas[best]) + " vs eta* " + Fmt(eta_star));
  }

  auto at_star = TwoStageEquilibrium(EtaStar(10, 1, 2), spec);
  if (t.Ok(at_star, "two-stage at eta*")) {
    const double ratio = (1.0 / (10 * LambdaStar(10, 1, 2))) / at_star->variance.value();
    const double one_stage = std::cbrt(20.0 / 9.0);
    t.Expect(std::abs(ratio - one_stage) <= 1e-8,
             "two-stage ratio " + Fmt(ratio) + " vs " + Fmt(one_stage));
  }

  const double lo = LambdaStar(10, 1, 2);
  const double hi = LambdaStar(9, 1, 2);
  int stable_points = 0;
  double first_stable = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double eta = lo + (hi - lo) * i / 21.0;
    auto stable = FullParticipationStable(eta, spec);
    if (!t.Ok(stable, "stability")) continue;
    if (*stable && stable_points++ == 0) first_stable = eta;
  }
  t.Expect(stable_points == 0,
           absl::StrCat("full participation passes the deviation test at ",
                        stable_points, "/20 points of (lambda*(10), lambda*(9)),",
                        " first at eta=", first_stable));
}

void PerAgentCost(Clauses& t) {
  AnalystCostSpec spec{0.04, 200, Hom(10, 1, 2, 0.1)};
  auto choice = OptimalAgentCount(spec);
  auto scan = ExhaustiveAgentCountScan(spec);
  if (t.Ok(choice, "C=0.04") && t.Ok(scan, "scan")) {
    t.Expect(choice->n_star == 11, absl::StrCat("n* = ", choice->n_star));
    t.Expect(choice->scan_argmin == choice->n_star,
             absl::StrCat("exhaustive argmin is ", choice->scan_argmin,
                          " (J_A=", choice->scan_cost, ") not n*=",
                          choice->n_star, " (J_A=", choice->cost, ")"));
    t.Expect(DefinitelyIncreasing(*scan), "scan not definitely increasing");
  }
  spec.C = 1.0;
  auto one = OptimalAgentCount(spec);
  if (t.Ok(one, "C=1")) {
    t.Expect(one->n_star == 1, absl::StrCat("C=1 gives n* = ", one->n_star));
  }
}

void MonteCarlo(Clauses& t) {
  const auto profile = Profile(std::vector<double>(100, 1.0), 1.0);
  for (auto noise : {NoiseDistribution::kGaussian, NoiseDistribution::kCenteredUniform}) {
    const std::string name =
        noise == NoiseDistribution::kGaussian ? "gaussian" : "uniform";
    PopulationModel model{0.0, 1.0, noise};
    auto r = SimulateEstimation(model, profile, 100000, 20261015);
    if (!t.Ok(r, name)) continue;
    t.Expect(std::abs(r->empirical_bias) <= 3 * r->bias_standard_error,
             name + " bias " + Fmt(r->empirical_bias));
    t.Expect(std::abs(r->empirical_variance - 0.01) <= 0.05 * 0.01,
             name + " variance " + Fmt(r->empirical_variance));
  }
}

struct CommandOutput {
  int exit_code = -1;
  std::string out;
};

CommandOutput RunCli(const std::string& args) {
  CommandOutput r;
  FILE* pipe = popen((std::string(PRIVGAME_CLI_PATH) + " " + args).c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<double>> CsvRows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

bool Close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

void FigureData(Clauses& t) {
  const CommandOutput fig1 = RunCli("fig1 --k-from 2 --k-to 500");
  t.Expect(fig1.exit_code == 0, "fig1 exit code");
  const auto rows1 = CsvRows(fig1.out);
  t.Expect(rows1.size() == 499, absl::StrCat("fig1 rows ", rows1.size()));
  if (!rows1.empty()) {
    std::size_t peak = 0;
    for (std::size_t i = 1; i < rows1.size(); ++i) {
      if (rows1[i][1] > rows1[peak][1]) peak = i;
    }
    for (std::size_t i = peak + 1; i < rows1.size(); ++i) {
      t.Expect(rows1[i][1] < rows1[i - 1][1] && rows1[i][1] > 1.0,
               "fig1 not decreasing toward 1 at k=" + Fmt(rows1[i][0]));
    }
    t.Expect(rows1.back()[1] - 1.0 < 0.02, "fig1 tail far from 1");
  }

  const CommandOutput fig2 = RunCli("fig2 --k-from 2 --k-to 20");
  t.Expect(fig2.exit_code == 0, "fig2 exit code");
  const auto rows2 = CsvRows(fig2.out);
  t.Expect(rows2.size() == 19, absl::StrCat("fig2 rows ", rows2.size()));
  const std::vector<double> c = {1, 1.5, 2, 2.5, 3};
  for (const auto& row : rows2) {
    // k,het_ratio,hom_ratio,eta_star,closed_form_eta_star,variance_unrestricted,variance_eta,at_cap
    const double k = row[0];
    const std::string at = "fig2 k=" + Fmt(k);
    t.Expect(row[1] > 1.0 && row[2] > 1.0, at + " ratio not above 1");
    const HeterogeneousGameSpec spec = Het(c, k, 0.5);
    auto free_eq = SolveUnrestricted(spec);
    auto mp = OptimalMinimumPrecision(spec);
    if (!t.Ok(free_eq, at) || !t.Ok(mp, at)) continue;
    HeterogeneousGameSpec restricted = spec;
    restricted.eta = mp->eta_star;
    auto eq = SolveRestricted(restricted);
    if (!t.Ok(eq, at)) continue;
    t.Expect(Close(row[3], mp->eta_star), at + " eta* mismatch");
    t.Expect(Close(row[5], free_eq->variance.value()), at + " variance mismatch");
    t.Expect(Close(row[6], eq->variance.value()), at + " restricted variance mismatch");
    t.Expect(Close(row[1], free_eq->variance.value() / eq->variance.value()),
             at + " ratio mismatch");
    t.Expect(eq->full_participation, at + " restricted lost participation");
  }
}

}  // namespace
}  // namespace privgame

int main() {
  using privgame::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "closed-form agreement", 1, privgame::ClosedFormAgreement},
      {2, "improvement ratio", 1, privgame::ImprovementRatioCriterion},
      {3, "oracle certification", 30, privgame::OracleCertification},
      {4, "minimum-precision boundary", 1, privgame::BoundaryBehaviour},
      {5, "monotonicity", 10, privgame::Monotonicity},
      {6, "heterogeneous witness", 5, privgame::HeterogeneousWitness},
      // Shares its instances and time budget with criterion 3.
      {7, "strict improvement", 30, privgame::StrictImprovement},
      {8, "two-stage game", 5, privgame::TwoStage},
      {9, "per-agent cost", 1, privgame::PerAgentCost},
      {10, "monte carlo", 10, privgame::MonteCarlo},
      {11, "figure data", 10, privgame::FigureData},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    privgame::Clauses t;
    const auto start = std::chrono::steady_clock::now();
    c.body(t);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.Expect(seconds < c.budget_seconds,
             absl::StrCat("runtime ", seconds, " s over budget ", c.budget_seconds, " s"));
    const bool pass = t.failures().empty();
    failed += !pass;
    std::printf("%s criterion %d: %s (%.3f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), seconds);
    for (std::size_t i = 0; i < t.failures().size() && i < 3; ++i) {
      std::printf("    %s\n", t.failures()[i].c_str());
    }
    if (t.failures().size() > 3) {
      std::printf("    ... %zu more\n", t.failures().size() - 3);
    }
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
