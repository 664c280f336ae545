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
// privgame command-line frontend. Talks to the library only through the C
// interface in privgame/privgame.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "privgame/privgame.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitRefuted = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void ConfigError(const std::string& message) {
  throw CliError(kExitConfig, message);
}

void Check(privgame_status status, const std::string& what) {
  if (status == PRIVGAME_OK) return;
  const int code =
      status == PRIVGAME_ERR_NOT_CONVERGED ? kExitNotConverged : kExitConfig;
  throw CliError(code, what + ": " + privgame_status_name(status) + ": " +
                           privgame_last_error_message());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PrivacyCostPtr =
    std::unique_ptr<privgame_privacy_cost,
                    Deleter<privgame_privacy_cost, privgame_privacy_cost_free>>;
using HomGamePtr =
    std::unique_ptr<privgame_hom_game,
                    Deleter<privgame_hom_game, privgame_hom_game_free>>;
using HetGamePtr =
    std::unique_ptr<privgame_het_game,
                    Deleter<privgame_het_game, privgame_het_game_free>>;

struct MonomialSpec {
  double c = 1.0;
  double k = 2.0;
};

struct SweepSpec {
  std::string parameter;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  bool log = false;
};

struct RunConfig {
  std::string game;  // hom | het | two-stage | cost-opt
  int n = 10;
  double sigma2 = 1.0;
  std::optional<double> eta;
  MonomialSpec privacy;
  std::vector<MonomialSpec> agents;
  std::optional<SweepSpec> sweep;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string noise = "gaussian";
  double true_mean = 0.0;
  std::vector<double> lambda;
  double C = 0.0;
  int n_max = 200;
  int grid_points = 2001;
  double tolerance = 1e-9;
  std::vector<double> profile;
  std::string output;
};

MonomialSpec ParseCost(const Json& j, const std::string& where) {
  if (!j.is_object()) ConfigError(where + " must be an object");
  const std::string kind = j.value("kind", "monomial");
  if (kind != "monomial") {
    ConfigError(where + ": only monomial privacy costs are configurable, got '" +
                kind + "'");
  }
  MonomialSpec out;
  out.c = j.value("c", out.c);
  out.k = j.value("k", out.k);
  return out;
}

RunConfig ParseConfig(const Json& j) {
  if (!j.is_object()) ConfigError("config must be a JSON object");
  RunConfig cfg;
  cfg.game = j.value("game", "");
  cfg.n = j.value("n", cfg.n);
  cfg.sigma2 = j.value("sigma2", cfg.sigma2);
  if (j.contains("eta") && !j["eta"].is_null()) cfg.eta = j["eta"].get<double>();
  if (j.contains("privacy_cost")) cfg.privacy = ParseCost(j["privacy_cost"], "privacy_cost");
  if (j.contains("agents")) {
    if (!j["agents"].is_array()) ConfigError("agents must be an array");
    for (std::size_t i = 0; i < j["agents"].size(); ++i) {
      cfg.agents.push_back(
          ParseCost(j["agents"][i], "agents[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("estimation_cost")) {
    const std::string kind = j["estimation_cost"].value("kind", "linear");
    if (kind != "linear") {
      ConfigError("only the linear estimation cost is configurable, got '" +
                  kind + "'");
    }
  }
  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    SweepSpec sweep;
    sweep.parameter = s.value("parameter", "");
    sweep.from = s.value("from", 0.0);
    sweep.to = s.value("to", 0.0);
    sweep.steps = s.value("steps", 2);
    sweep.log = s.value("log", false);
    cfg.sweep = sweep;
  }
  if (j.contains("monte_carlo")) {
    const Json& m = j["monte_carlo"];
    cfg.trials = m.value("trials", cfg.trials);
    cfg.seed = m.value("seed", cfg.seed);
    cfg.noise = m.value("noise", cfg.noise);
    cfg.true_mean = m.value("true_mean", cfg.true_mean);
    if (m.contains("lambda")) cfg.lambda = m["lambda"].get<std::vector<double>>();
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.C = j.value("C", cfg.C);
  cfg.n_max = j.value("n_max", cfg.n_max);
  if (j.contains("verify")) {
    const Json& v = j["verify"];
    cfg.grid_points = v.value("grid_points", cfg.grid_points);
    cfg.tolerance = v.value("tolerance", cfg.tolerance);
    if (v.contains("profile")) cfg.profile = v["profile"].get<std::vector<double>>();
  }
  cfg.output = j.value("output", "");
  return cfg;
}

Json ReadJson(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) ConfigError("cannot open config '" + path + "'");
    return Json::parse(in);
  } catch (const Json::exception& e) {
    ConfigError("config '" + path + "': " + e.what());
  }
}

// Command-line overrides, applied on top of the config file.
struct Flags {
  std::string config;
  bool hom = false;
  bool het = false;
  int n = 0;
  double c = 0.0;
  double k = 0.0;
  double sigma2 = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string output;
  std::vector<double> agents;
  std::string sweep;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  bool log = false;
  std::int64_t trials = 0;
  std::string noise;
  double C = 0.0;
  int n_max = 0;
  int grid_points = 0;
  double tolerance = 0.0;
  double k_from = 2.0;
  double k_to = 0.0;
  double k_step = 1.0;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> apply;
};

template <typename T>
void Override(CLI::App& app, Flags& flags, const std::string& name, T& target,
              const std::string& help,
              std::function<void(RunConfig&, const T&)> set) {
  CLI::Option* opt = app.add_option(name, target, help);
  flags.apply.emplace_back(opt, [&target, set](RunConfig& cfg) { set(cfg, target); });
}

void AddFlags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file, '-' for stdin");
  app.add_flag("--hom", f.hom, "homogeneous game");
  app.add_flag("--het", f.het, "heterogeneous game");
  Override<int>(app, f, "--n", f.n, "agent count",
                [](RunConfig& c, const int& v) { c.n = v; });
  Override<double>(app, f, "--c", f.c, "privacy cost coefficient",
                   [](RunConfig& c, const double& v) {
                     c.privacy.c = v;
                   });
  Override<double>(app, f, "--k", f.k, "privacy cost exponent",
                   [](RunConfig& c, const double& v) {
                     c.privacy.k = v;
                     for (auto& a : c.agents) a.k = v;
                   });
  Override<double>(app, f, "--sigma2", f.sigma2, "inherent data variance",
                   [](RunConfig& c, const double& v) { c.sigma2 = v; });
  Override<double>(app, f, "--eta", f.eta, "minimum precision level",
                   [](RunConfig& c, const double& v) { c.eta = v; });
  Override<std::uint64_t>(app, f, "--seed", f.seed, "random seed",
                          [](RunConfig& c, const std::uint64_t& v) { c.seed = v; });
  Override<std::string>(app, f, "--output,-o", f.output, "output path",
                        [](RunConfig& c, const std::string& v) { c.output = v; });
  CLI::Option* agents =
      app.add_option("--agents", f.agents, "per-agent cost coefficients")
          ->delimiter(',');
  f.apply.emplace_back(agents, [&f](RunConfig& c) {
    c.agents.clear();
    for (double coef : f.agents) c.agents.push_back({coef, c.privacy.k});
  });
  Override<std::string>(app, f, "--sweep", f.sweep, "sweep parameter (n, k, c, eta)",
                        [](RunConfig& c, const std::string& v) {
                          if (!c.sweep) c.sweep = SweepSpec{};
                          c.sweep->parameter = v;
                        });
  Override<double>(app, f, "--from", f.from, "sweep start",
                   [](RunConfig& c, const double& v) {
                     if (!c.sweep) c.sweep = SweepSpec{};
                     c.sweep->from = v;
                   });
  Override<double>(app, f, "--to", f.to, "sweep end",
                   [](RunConfig& c, const double& v) {
                     if (!c.sweep) c.sweep = SweepSpec{};
                     c.sweep->to = v;
                   });
  Override<int>(app, f, "--steps", f.steps, "sweep points",
                [](RunConfig& c, const int& v) {
                  if (!c.sweep) c.sweep = SweepSpec{};
                  c.sweep->steps = v;
                });
  CLI::Option* log = app.add_flag("--log", f.log, "log-spaced sweep");
  f.apply.emplace_back(log, [&f](RunConfig& c) {
    if (!c.sweep) c.sweep = SweepSpec{};
    c.sweep->log = f.log;
  });
  Override<std::int64_t>(app, f, "--trials", f.trials, "Monte Carlo trials",
                         [](RunConfig& c, const std::int64_t& v) { c.trials = v; });
  Override<std::string>(app, f, "--noise", f.noise, "gaussian or uniform",
                        [](RunConfig& c, const std::string& v) { c.noise = v; });
  Override<double>(app, f, "--per-agent-cost,-C", f.C, "analyst cost per agent",
                   [](RunConfig& c, const double& v) { c.C = v; });
  Override<int>(app, f, "--n-max", f.n_max, "agent count search bound",
                [](RunConfig& c, const int& v) { c.n_max = v; });
  Override<int>(app, f, "--grid-points", f.grid_points, "oracle grid size",
                [](RunConfig& c, const int& v) { c.grid_points = v; });
  Override<double>(app, f, "--tolerance", f.tolerance, "oracle tolerance",
                   [](RunConfig& c, const double& v) { c.tolerance = v; });
  app.add_option("--k-from", f.k_from, "first exponent (fig1, fig2)");
  app.add_option("--k-to", f.k_to, "last exponent (fig1, fig2)");
  app.add_option("--k-step", f.k_step, "exponent step (fig1, fig2)");
}

RunConfig Resolve(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) cfg = ParseConfig(ReadJson(flags.config));
  for (const auto& [opt, set] : flags.apply) {
    if (opt->count() > 0) set(cfg);
  }
  if (flags.hom && flags.het) ConfigError("--hom and --het are exclusive");
  if (flags.hom) cfg.game = "hom";
  if (flags.het) cfg.game = "het";
  if (cfg.game.empty()) cfg.game = cfg.agents.empty() ? "hom" : "het";
  if (cfg.game != "hom" && cfg.game != "het" && cfg.game != "two-stage" &&
      cfg.game != "cost-opt") {
    ConfigError("unknown game kind '" + cfg.game + "'");
  }
  if (cfg.game == "het" && cfg.agents.empty()) {
    ConfigError("heterogeneous game needs agents");
  }
  return cfg;
}

/* Formatting */

std::string Number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json JsonNumber(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json JsonArray(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(JsonNumber(x));
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void Emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) ConfigError("cannot write '" + cfg.output + "'");
  out << text;
}

void EmitJson(const RunConfig& cfg, const Json& j) { Emit(cfg, j.dump(2) + "\n"); }

/* Game construction */

PrivacyCostPtr MakeCost(const MonomialSpec& m) {
  privgame_privacy_cost* raw = nullptr;
  Check(privgame_privacy_cost_monomial(m.c, m.k, &raw), "privacy cost");
  return PrivacyCostPtr(raw);
}

HomGamePtr MakeHomGame(const RunConfig& cfg) {
  PrivacyCostPtr cost = MakeCost(cfg.privacy);
  privgame_hom_game* raw = nullptr;
  Check(privgame_hom_game_create(cfg.n, cfg.sigma2, cost.get(), nullptr, &raw),
        "homogeneous game");
  HomGamePtr game(raw);
  if (cfg.eta) Check(privgame_hom_game_set_eta(game.get(), *cfg.eta), "eta");
  Check(privgame_hom_game_validate(game.get()), "homogeneous game");
  return game;
}

HetGamePtr MakeHetGame(const RunConfig& cfg, bool with_eta = true) {
  privgame_het_game* raw = nullptr;
  Check(privgame_het_game_create(cfg.sigma2, nullptr, &raw), "heterogeneous game");
  HetGamePtr game(raw);
  for (const MonomialSpec& a : cfg.agents) {
    PrivacyCostPtr cost = MakeCost(a);
    Check(privgame_het_game_add_agent(game.get(), cost.get()), "agent");
  }
  if (with_eta && cfg.eta) {
    Check(privgame_het_game_set_eta(game.get(), *cfg.eta), "eta");
  }
  Check(privgame_het_game_validate(game.get()), "heterogeneous game");
  return game;
}

std::vector<MonomialSpec> AgentCosts(const RunConfig& cfg) {
  if (cfg.game == "het") return cfg.agents;
  return std::vector<MonomialSpec>(static_cast<std::size_t>(std::max(cfg.n, 0)),
                                   cfg.privacy);
}

struct HetSolution {
  std::vector<double> lambda;
  std::vector<int> participation;
  privgame_het_summary summary{};
};

HetSolution SolveHet(privgame_het_game* game) {
  HetSolution s;
  const std::size_t n = privgame_het_game_size(game);
  s.lambda.resize(n);
  s.participation.resize(n);
  Check(privgame_het_solve(game, s.lambda.data(), s.participation.data(), n,
                           &s.summary),
        "heterogeneous solve");
  return s;
}

Json HomEquilibriumJson(const privgame_hom_equilibrium& eq) {
  Json j;
  j["n"] = eq.n;
  j["lambda_star"] = JsonNumber(eq.lambda_star);
  j["variance"] = JsonNumber(eq.variance);
  j["at_cap"] = eq.at_cap != 0;
  j["full_participation"] = eq.full_participation != 0;
  j["diagnostics"] = {{"iterations", eq.iterations},
                      {"residual", JsonNumber(eq.residual)},
                      {"used_bisection", eq.used_bisection != 0}};
  return j;
}

/* Subcommands */

int RunSolve(const RunConfig& cfg) {
  Json j;
  j["game"] = cfg.game;
  j["sigma2"] = cfg.sigma2;
  j["eta"] = cfg.eta ? JsonNumber(*cfg.eta) : Json(nullptr);
  if (cfg.game == "het") {
    HetGamePtr game = MakeHetGame(cfg);
    const HetSolution s = SolveHet(game.get());
    j["lambda"] = JsonArray(s.lambda);
    Json part = Json::array();
    for (int p : s.participation) part.push_back(p != 0);
    j["participation"] = part;
    j["variance"] = JsonNumber(s.summary.variance);
    j["potential"] = JsonNumber(s.summary.potential);
    j["full_participation"] = s.summary.full_participation != 0;
    j["ordering_ok"] = s.summary.ordering_ok != 0;
    j["diagnostics"] = {{"sweeps", s.summary.sweeps},
                        {"max_change", JsonNumber(s.summary.max_change)},
                        {"kkt_residual", JsonNumber(s.summary.kkt_residual)}};
  } else {
    HomGamePtr game = MakeHomGame(cfg);
    privgame_hom_equilibrium eq{};
    Check(privgame_hom_solve(game.get(), &eq), "homogeneous solve");
    const Json eq_json = HomEquilibriumJson(eq);
    for (const auto& [key, value] : eq_json.items()) j[key] = value;
  }
  EmitJson(cfg, j);
  return kExitOk;
}

int RunEtaStar(const RunConfig& cfg) {
  Json j;
  j["game"] = cfg.game;
  j["sigma2"] = cfg.sigma2;
  privgame_min_precision r{};
  if (cfg.game == "het") {
    HetGamePtr game = MakeHetGame(cfg, false);
    Check(privgame_het_eta_star(game.get(), &r), "eta*");
    j["n"] = cfg.agents.size();
    j["eta_star"] = JsonNumber(r.eta_star);
    j["at_cap"] = r.at_cap != 0;
    j["residual"] = JsonNumber(r.residual);
    j["iterations"] = r.iterations;
    std::vector<double> coefs;
    bool common_k = true;
    for (const MonomialSpec& a : cfg.agents) {
      coefs.push_back(a.c);
      common_k = common_k && a.k == cfg.agents.front().k;
    }
    double closed = NAN;
    if (common_k && privgame_het_closed_form_eta_star(
                        coefs.data(), coefs.size(), cfg.agents.front().k,
                        cfg.sigma2, &closed) != PRIVGAME_OK) {
      closed = NAN;
    }
    j["closed_form_eta_star"] = JsonNumber(closed);
  } else {
    RunConfig free = cfg;
    free.eta.reset();
    HomGamePtr game = MakeHomGame(free);
    Check(privgame_hom_eta_star(game.get(), cfg.n, &r), "eta*");
    j["n"] = cfg.n;
    j["eta_star"] = JsonNumber(r.eta_star);
    j["at_cap"] = r.at_cap != 0;
    double closed = NAN;
    if (privgame_closed_form_eta_star(cfg.n, cfg.privacy.c, cfg.privacy.k,
                                      cfg.sigma2, &closed) != PRIVGAME_OK) {
      closed = NAN;
    }
    j["closed_form_eta_star"] = JsonNumber(closed);
    j["diagnostics"] = {{"iterations", r.iterations},
                        {"residual", JsonNumber(r.residual)},
                        {"used_bisection", r.used_bisection != 0}};
  }
  EmitJson(cfg, j);
  return kExitOk;
}

std::vector<double> Grid(const SweepSpec& sweep) {
  if (sweep.steps < 1) ConfigError("sweep steps must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(sweep.steps));
  Check(privgame_sweep_grid(sweep.from, sweep.to, sweep.steps, sweep.log,
                            grid.data(), grid.size()),
        "sweep grid");
  return grid;
}

int RunSweep(const RunConfig& cfg) {
  if (!cfg.sweep || cfg.sweep->parameter.empty()) {
    ConfigError("sweep needs a parameter (--sweep or config \"sweep\")");
  }
  if (cfg.game != "hom") ConfigError("sweeps run on the homogeneous game");
  RunConfig base = cfg;
  base.eta.reset();
  HomGamePtr game = MakeHomGame(base);
  const std::vector<double> grid = Grid(*cfg.sweep);
  std::vector<privgame_sweep_record> records(grid.size());
  Check(privgame_hom_sweep(game.get(), cfg.sweep->parameter.c_str(), grid.data(),
                           grid.size(), records.data()),
        "sweep");
  std::ostringstream out;
  out << "parameter,value,lambda_star,eta_star,variance_gamma,variance_eta,"
         "ratio,asymptote,boundary,diagnostic\n";
  for (const privgame_sweep_record& r : records) {
    out << cfg.sweep->parameter << ',' << Number(r.parameter_value) << ','
        << Number(r.lambda_star) << ',' << Number(r.eta_star) << ','
        << Number(r.variance_gamma) << ',' << Number(r.variance_eta) << ','
        << Number(r.ratio) << ',' << Number(r.asymptote) << ','
        << r.boundary_flag << ',' << CsvField(r.diagnostic) << '\n';
  }
  Emit(cfg, out.str());
  return kExitOk;
}

struct TwoStageRow {
  privgame_two_stage_result result{};
  std::vector<int> counts;
};

TwoStageRow SolveTwoStage(privgame_hom_game* game, double eta, int n) {
  TwoStageRow row;
  row.counts.resize(static_cast<std::size_t>(n) + 1);
  Check(privgame_two_stage(game, eta, &row.result, row.counts.data(),
                           row.counts.size()),
        "two-stage");
  row.counts.resize(row.result.num_equilibrium_counts);
  return row;
}

int RunTwoStage(const RunConfig& cfg) {
  RunConfig base = cfg;
  base.eta.reset();
  base.game = "hom";
  HomGamePtr game = MakeHomGame(base);
  if (cfg.sweep && !cfg.sweep->parameter.empty()) {
    if (cfg.sweep->parameter != "eta") {
      ConfigError("two-stage sweeps run over eta only");
    }
    std::ostringstream out;
    out << "eta,participation_count,precision,variance,unique,"
           "in_full_participation_range,equilibrium_counts\n";
    for (double eta : Grid(*cfg.sweep)) {
      const TwoStageRow row = SolveTwoStage(game.get(), eta, cfg.n);
      std::string counts;
      for (std::size_t i = 0; i < row.counts.size(); ++i) {
        if (i > 0) counts += ';';
        counts += std::to_string(row.counts[i]);
      }
      out << Number(eta) << ',' << row.result.participation_count << ','
          << Number(row.result.precision) << ',' << Number(row.result.variance)
          << ',' << row.result.unique << ','
          << row.result.in_full_participation_range << ',' << counts << '\n';
    }
    Emit(cfg, out.str());
    return kExitOk;
  }
  if (!cfg.eta) ConfigError("two-stage needs eta (or an eta sweep)");
  const TwoStageRow row = SolveTwoStage(game.get(), *cfg.eta, cfg.n);
  Json j;
  j["eta"] = JsonNumber(row.result.eta);
  j["participation_count"] = row.result.participation_count;
  j["precision"] = JsonNumber(row.result.precision);
  j["variance"] = JsonNumber(row.result.variance);
  j["unique"] = row.result.unique != 0;
  j["in_full_participation_range"] = row.result.in_full_participation_range != 0;
  j["equilibrium_counts"] = row.counts;
  EmitJson(cfg, j);
  return kExitOk;
}

int RunCostOpt(const RunConfig& cfg) {
  RunConfig base = cfg;
  base.eta.reset();
  base.game = "hom";
  HomGamePtr game = MakeHomGame(base);
  privgame_agent_count r{};
  Check(privgame_optimal_agent_count(game.get(), cfg.C, cfg.n_max, &r),
        "agent count");
  std::vector<double> scan(static_cast<std::size_t>(cfg.n_max));
  Check(privgame_agent_count_scan(game.get(), cfg.C, cfg.n_max, scan.data(),
                                  scan.size()),
        "agent count scan");
  int increasing = 0;
  Check(privgame_definitely_increasing(scan.data(), scan.size(), &increasing),
        "scan shape");
  Json j;
  j["C"] = cfg.C;
  j["n_max"] = cfg.n_max;
  j["n_star"] = r.n_star;
  j["cost"] = JsonNumber(r.cost);
  j["rule_verified"] = r.rule_verified != 0;
  j["scan_argmin"] = r.scan_argmin;
  j["scan_cost"] = JsonNumber(r.scan_cost);
  j["matches_scan"] = r.matches_scan != 0;
  j["definitely_increasing"] = increasing != 0;
  j["scan"] = JsonArray(scan);
  EmitJson(cfg, j);
  return kExitOk;
}

int RunMonteCarlo(const RunConfig& cfg) {
  std::vector<double> lambda = cfg.lambda;
  if (lambda.empty()) {
    if (cfg.n < 1) ConfigError("monte-carlo needs n >= 1 or a lambda profile");
    lambda.assign(static_cast<std::size_t>(cfg.n), 1.0 / cfg.sigma2);
  }
  privgame_noise noise;
  if (cfg.noise == "gaussian") {
    noise = PRIVGAME_NOISE_GAUSSIAN;
  } else if (cfg.noise == "uniform" || cfg.noise == "centered-uniform") {
    noise = PRIVGAME_NOISE_CENTERED_UNIFORM;
  } else {
    ConfigError("unknown noise '" + cfg.noise + "' (gaussian, uniform)");
  }
  if (cfg.trials < 1) ConfigError("trials must be >= 1");
  privgame_mc_report r{};
  Check(privgame_monte_carlo(lambda.data(), lambda.size(), cfg.sigma2,
                             cfg.true_mean, noise,
                             static_cast<std::size_t>(cfg.trials), cfg.seed, &r),
        "monte carlo");
  Json j;
  j["n"] = lambda.size();
  j["sigma2"] = cfg.sigma2;
  j["noise"] = noise == PRIVGAME_NOISE_GAUSSIAN ? "gaussian" : "uniform";
  j["true_mean"] = cfg.true_mean;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["empirical_bias"] = JsonNumber(r.empirical_bias);
  j["bias_standard_error"] = JsonNumber(r.bias_standard_error);
  j["empirical_variance"] = JsonNumber(r.empirical_variance);
  j["variance_standard_error"] = JsonNumber(r.variance_standard_error);
  j["theoretical_variance"] = JsonNumber(r.theoretical_variance);
  EmitJson(cfg, j);
  return kExitOk;
}

int RunVerify(const RunConfig& cfg) {
  std::vector<double> profile = cfg.profile;
  if (profile.empty()) {
    if (cfg.game == "het") {
      HetGamePtr game = MakeHetGame(cfg);
      profile = SolveHet(game.get()).lambda;
    } else {
      HomGamePtr game = MakeHomGame(cfg);
      privgame_hom_equilibrium eq{};
      Check(privgame_hom_solve(game.get(), &eq), "homogeneous solve");
      // Without a full-participation equilibrium, test everyone at the floor.
      const double lambda = eq.full_participation ? eq.lambda_star : *cfg.eta;
      profile.assign(static_cast<std::size_t>(cfg.n), lambda);
    }
  }
  const std::vector<MonomialSpec> specs = AgentCosts(cfg);
  if (specs.size() != profile.size()) {
    ConfigError("profile has " + std::to_string(profile.size()) +
                " entries for " + std::to_string(specs.size()) + " agents");
  }
  std::vector<PrivacyCostPtr> owned;
  std::vector<const privgame_privacy_cost*> costs;
  for (const MonomialSpec& m : specs) {
    owned.push_back(MakeCost(m));
    costs.push_back(owned.back().get());
  }
  const double cap = 1.0 / cfg.sigma2;
  const privgame_strategy_set set =
      cfg.eta ? privgame_strategy_set{*cfg.eta, cap, 1}
              : privgame_strategy_set{0.0, cap, 0};
  int certified = 0;
  privgame_deviation witness{};
  Check(privgame_verify_nash(profile.data(), profile.size(), cfg.sigma2, &set, 1,
                             cfg.grid_points, cfg.tolerance, costs.data(),
                             nullptr, &certified, &witness),
        "verify");
  Json j;
  j["verdict"] = certified ? "certified" : "refuted";
  j["grid_points"] = cfg.grid_points;
  j["tolerance"] = cfg.tolerance;
  j["profile"] = JsonArray(profile);
  if (!certified) {
    j["witness"] = {{"agent", witness.agent},
                    {"deviation", JsonNumber(witness.best_deviation)},
                    {"candidate_cost", JsonNumber(witness.candidate_cost)},
                    {"deviation_cost", JsonNumber(witness.best_cost)},
                    {"improvement", JsonNumber(witness.improvement)},
                    {"candidate_in_set", witness.candidate_in_set != 0}};
  }
  EmitJson(cfg, j);
  return certified ? kExitOk : kExitRefuted;
}

std::vector<double> ExponentGrid(double from, double to, double step) {
  if (!(step > 0.0)) ConfigError("--k-step must be positive");
  if (!(to >= from)) ConfigError("--k-to must be >= --k-from");
  std::vector<double> ks;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) ks.push_back(from + step * i);
  return ks;
}

int RunFig1(const RunConfig& cfg, const Flags& flags) {
  const double k_to = flags.k_to > 0.0 ? flags.k_to : 500.0;
  std::ostringstream out;
  out << "k,ratio,finite_ratio,n\n";
  for (double k : ExponentGrid(flags.k_from, k_to, flags.k_step)) {
    privgame_ratio r{};
    Check(privgame_improvement_ratio(cfg.n, cfg.privacy.c, k, cfg.sigma2, &r),
          "improvement ratio");
    out << Number(k) << ',' << Number(r.asymptote) << ',' << Number(r.finite)
        << ',' << cfg.n << '\n';
  }
  Emit(cfg, out.str());
  return kExitOk;
}

int RunFig2(const RunConfig& cfg, const Flags& flags) {
  const double k_to = flags.k_to > 0.0 ? flags.k_to : 20.0;
  std::vector<double> coefs;
  for (const MonomialSpec& a : cfg.agents) coefs.push_back(a.c);
  const double c_max = *std::max_element(coefs.begin(), coefs.end());
  const int n = static_cast<int>(coefs.size());

  std::ostringstream out;
  out << "k,het_ratio,hom_ratio,eta_star,closed_form_eta_star,"
         "variance_unrestricted,variance_eta,at_cap\n";
  for (double k : ExponentGrid(flags.k_from, k_to, flags.k_step)) {
    RunConfig inst = cfg;
    inst.game = "het";
    inst.eta.reset();
    for (MonomialSpec& a : inst.agents) a.k = k;
    HetGamePtr game = MakeHetGame(inst);
    const HetSolution free = SolveHet(game.get());
    privgame_min_precision eta{};
    Check(privgame_het_eta_star(game.get(), &eta), "eta*");
    Check(privgame_het_game_set_eta(game.get(), eta.eta_star), "eta");
    const HetSolution floored = SolveHet(game.get());
    privgame_ratio hom{};
    Check(privgame_improvement_ratio(n, c_max, k, cfg.sigma2, &hom),
          "homogeneous ratio");
    double closed = NAN;
    if (privgame_het_closed_form_eta_star(coefs.data(), coefs.size(), k,
                                          cfg.sigma2, &closed) != PRIVGAME_OK) {
      closed = NAN;
    }
    out << Number(k) << ','
        << Number(free.summary.variance / floored.summary.variance) << ','
        << Number(hom.finite) << ',' << Number(eta.eta_star) << ','
        << Number(closed) << ',' << Number(free.summary.variance) << ','
        << Number(floored.summary.variance) << ',' << eta.at_cap << '\n';
  }
  Emit(cfg, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privgame: privacy-precision estimation games"};
  app.fallthrough();
  app.require_subcommand(1);
  Flags flags;
  AddFlags(app, flags);

  CLI::App* solve = app.add_subcommand("solve", "equilibrium of one instance");
  CLI::App* eta_star = app.add_subcommand("eta-star", "optimal minimum precision");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep as CSV");
  CLI::App* two_stage = app.add_subcommand("two-stage", "two-stage game");
  CLI::App* cost_opt = app.add_subcommand("cost-opt", "analyst agent count");
  CLI::App* monte_carlo =
      app.add_subcommand("monte-carlo", "simulate the estimator");
  CLI::App* verify = app.add_subcommand("verify", "oracle Nash verification");
  CLI::App* fig1 = app.add_subcommand("fig1", "improvement ratio over k");
  CLI::App* fig2 =
      app.add_subcommand("fig2", "heterogeneous vs homogeneous ratio over k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (*fig1) {
      RunConfig cfg = Resolve(flags);
      if (flags.config.empty() && !app.get_option("--n")->count()) cfg.n = 10;
      return RunFig1(cfg, flags);
    }
    if (*fig2) {
      RunConfig cfg;
      if (!flags.config.empty()) cfg = ParseConfig(ReadJson(flags.config));
      if (cfg.agents.empty()) {
        for (double c : {1.0, 1.5, 2.0, 2.5, 3.0}) cfg.agents.push_back({c, 2.0});
        cfg.sigma2 = 0.5;
      }
      for (const auto& [opt, set] : flags.apply) {
        if (opt->count() > 0) set(cfg);
      }
      return RunFig2(cfg, flags);
    }
    RunConfig cfg = Resolve(flags);
    if (*solve) return RunSolve(cfg);
    if (*eta_star) return RunEtaStar(cfg);
    if (*sweep) return RunSweep(cfg);
    if (*two_stage) return RunTwoStage(cfg);
    if (*cost_opt) return RunCostOpt(cfg);
    if (*monte_carlo) return RunMonteCarlo(cfg);
    if (*verify) return RunVerify(cfg);
  } catch (const CliError& e) {
    std::cerr << "privgame: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "privgame: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
