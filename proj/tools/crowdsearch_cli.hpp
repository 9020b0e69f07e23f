// Copyright 2026 The Crowdsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. dispatch() is kept in a header so tests can run
// commands in-process.
//
// Exit codes: 0 ok, 1 a `tables` reproduction missed its target, 2 bad
// input or usage, 3 a solver did not converge.

#ifndef CROWDSEARCH_TOOLS_CROWDSEARCH_CLI_HPP_
#define CROWDSEARCH_TOOLS_CROWDSEARCH_CLI_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowdsearch/crowdsearch.hpp"
#include "crowdsearch/json_io.hpp"

namespace crowdsearch::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

struct Options {
  std::string dist = R"({"kind":"uniform","a":0,"b":1})";
  double q = 1.0;
  double V = 1.0;
  double n = 2.0;
  double W = 2.0;
  double qe = 0.5;
  std::string mode = "shared";
  std::string qvec;
  std::string v;
  double tol = kDefaultTolerance;
  std::string format = "csv";
  std::string out;

  // sweep
  std::string over = "n";
  std::string values;
  std::string target = "equilibrium";
  // tables
  std::string name;
  // hetero
  std::size_t scan = 0;
  // simulate
  long long reps = 100000;
  std::uint64_t seed = 1;
  std::string variant = "baseline";
  std::optional<double> threshold;
  std::optional<double> deviation;
  unsigned threads = 0;
};

// A command's output: rows of flat records plus a status code.
struct Outcome {
  Json rows = Json::array();
  int status = kExitOk;
};

namespace detail {

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string csv_cell(const Json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += csv_cell(v[i]);
    }
    return s;
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

inline void write_csv(std::ostream& os, const Json& rows) {
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& row : rows) {
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (std::find(header.begin(), header.end(), it.key()) == header.end()) {
        header.push_back(it.key());
      }
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      os << (i ? "," : "");
      if (row.contains(header[i])) os << csv_cell(row.at(header[i]));
    }
    os << '\n';
  }
}

inline Json equilibrium_row(const EquilibriumResult& r) {
  return {{"n", r.config.n},
          {"q", r.config.q},
          {"V", r.config.V},
          {"threshold", r.threshold},
          {"success_prob", r.success_prob},
          {"expected_searchers", r.expected_searchers},
          {"win_prob", r.win_prob},
          {"interior", r.interior},
          {"residual", r.residual}};
}

inline int integer_n(double n) {
  crowdsearch::detail::require(n == std::floor(n) && n >= 1.0 && n <= 1e7,
                               "n must be a positive integer here");
  return static_cast<int>(n);
}

inline RewardMode parse_mode(const std::string& mode) {
  if (mode == "shared") return RewardMode::kShared;
  if (mode == "keep") return RewardMode::kExpertKeeps;
  throw ValidationError("--mode must be shared or keep");
}

struct Target {
  double n;
  double threshold;
  double success;
};

inline Outcome table_rows(const CostDistribution& d, double q, double V,
                          const std::vector<Target>& targets, double tol) {
  Outcome o;
  for (const Target& t : targets) {
    const EquilibriumResult r = solve_threshold(d, {t.n, q, V});
    const double e1 = std::abs(r.threshold - t.threshold);
    const double e2 = std::abs(r.success_prob - t.success);
    const bool ok = e1 <= tol && e2 <= tol;
    if (!ok) o.status = kExitMismatch;
    o.rows.push_back({{"n", t.n},
                      {"threshold", r.threshold},
                      {"success_prob", r.success_prob},
                      {"target_threshold", t.threshold},
                      {"target_success_prob", t.success},
                      {"max_abs_error", std::max(e1, e2)},
                      {"match", ok}});
  }
  return o;
}

}  // namespace detail

// ---- commands --------------------------------------------------------------

inline Outcome cmd_solve(const Options& o) {
  const CostDistribution d = parse_distribution(o.dist);
  const EquilibriumResult r = solve_threshold(d, {o.n, o.q, o.V}, o.tol);
  Json row = detail::equilibrium_row(r);
  const InteriorityDiagnostic diag = check_interiority(d, {o.n, o.q, o.V});
  row["lower_margin"] = diag.lower_margin;
  row["upper_margin"] = diag.upper_margin;
  Outcome out;
  out.rows.push_back(std::move(row));
  return out;
}

inline Outcome cmd_principal(const Options& o) {
  const CostDistribution d = parse_distribution(o.dist);
  const PrincipalConfig cfg{o.W, o.n, o.q};
  const PrizeSolution s = optimal_prize(d, cfg, o.tol);
  const double P = success_probability(d, {o.n, o.q, 1.0}, s.threshold);
  Outcome out;
  out.rows.push_back({{"W", cfg.W},
                      {"n", cfg.n},
                      {"q", cfg.q},
                      {"threshold", s.threshold},
                      {"prize", s.prize},
                      {"regime", std::string(to_string(s.regime))},
                      {"success_prob", P},
                      {"value", (cfg.W - s.prize) * P},
                      {"certified", s.certified},
                      {"W_lower", s.bounds.lower},
                      {"W_upper", std::isfinite(s.bounds.upper) ? Json(s.bounds.upper)
                                                               : Json("inf")}});
  return out;
}

inline Outcome cmd_sweep(const Options& o) {
  crowdsearch::detail::require(!o.values.empty(), "sweep: --values is required");
  const std::vector<double> values = vector_from_json(o.values, "--values");
  crowdsearch::detail::require(o.over == "n" || o.over == "V" || o.over == "q" || o.over == "W",
                               "sweep: --over must be n, V, q or W");
  crowdsearch::detail::require(o.target == "equilibrium" || o.target == "principal",
                               "sweep: --target must be equilibrium or principal");
  crowdsearch::detail::require(!(o.over == "W" && o.target == "equilibrium"),
                               "sweep: --over W needs --target principal");
  crowdsearch::detail::require(!(o.over == "V" && o.target == "principal"),
                               "sweep: --over V needs --target equilibrium");
  Outcome out;
  for (double x : values) {
    Options p = o;
    if (o.over == "n") p.n = x;
    if (o.over == "V") p.V = x;
    if (o.over == "q") p.q = x;
    if (o.over == "W") p.W = x;
    Outcome one = o.target == "principal" ? cmd_principal(p) : cmd_solve(p);
    for (auto& row : one.rows) out.rows.push_back(std::move(row));
  }
  return out;
}

inline Outcome cmd_tables(const Options& o) {
  constexpr double kTol = 5e-4;
  const std::string& name = o.name;
  if (name == "table1a") {
    return detail::table_rows(CostDistribution::power(20.0), 1.0, 1.0,
                              {{2, .9151, .3106},
                               {3, .8951, .2924},
                               {4, .8828, .2917},
                               {5, .8739, .2948},
                               {6, .8669, .2989}},
                              kTol);
  }
  if (name == "table1b") {
    return detail::table_rows(CostDistribution::uniform(0, 1), 1.0, 1.999,
                              {{2, .9998, .9999},
                               {3, .8136, .9935},
                               {4, .7042, .9923},
                               {5, .6301, .9931},
                               {6, .5755, .9941}},
                              kTol);
  }
  if (name == "table2a") {
    return detail::table_rows(CostDistribution::uniform(0, 1), 0.5, 1.0,
                              {{10, .2787, .7771},
                               {100, .0997, .9939},
                               {1000, .0316, .9999},
                               {2000, .0224, .9999}},
                              kTol);
  }
  if (name == "table2b") {
    Outcome out = detail::table_rows(CostDistribution::uniform(0.25, 1.25), 0.5, 1.0,
                                     {{10, .3780, .4839},
                                      {100, .2767, .7395},
                                      {1000, .2531, .7904},
                                      {2000, .2516, .7936}},
                                     kTol);
    const LimitResult lim = large_contest_limit(0.25, 0.5, 1.0);
    const bool ok = std::abs(lim.kappa - 3.188) <= kTol && std::abs(lim.p_infinity - 0.797) <= 5e-3;
    if (!ok) out.status = kExitMismatch;
    out.rows.push_back({{"n", "inf"},
                        {"kappa", lim.kappa},
                        {"success_prob", lim.p_infinity},
                        {"target_kappa", 3.188},
                        {"target_success_prob", 0.797},
                        {"match", ok}});
    return out;
  }
  if (name == "example3") {
    const CostDistribution d = CostDistribution::uniform(0, 1);
    Outcome out;
    auto add = [&](const std::string& quantity, double value, double target, bool ok) {
      if (!ok) out.status = kExitMismatch;
      out.rows.push_back(
          {{"quantity", quantity}, {"value", value}, {"target", target}, {"match", ok}});
    };
    const double u1 = principal_value_multi(d, 1.0, 2.0, PrizeStructure({1.0, 0.0}));
    const double u34 = principal_value_multi(d, 1.0, 2.0, PrizeStructure({0.75, 0.25}));
    const double c34 = solve_threshold_multi(d, 1.0, PrizeStructure({0.75, 0.25})).threshold;
    const OptimalStructure best = optimal_prize_structure(d, 1.0, 2, 2.0, 1.0);
    add("value_winner_takes_all", u1, 8.0 / 9.0, std::abs(u1 - 8.0 / 9.0) <= 1e-9);
    add("value_split_0.75", u34, 24.0 / 25.0, std::abs(u34 - 24.0 / 25.0) <= 1e-9);
    add("threshold_split_0.75", c34, 0.6, std::abs(c34 - 0.6) <= 1e-9);
    add("value_optimal", best.value, 24.0 / 25.0, best.value >= 24.0 / 25.0 - 1e-9);
    return out;
  }
  if (name == "appendixC") {
    const CostDistribution d =
        CostDistribution::piecewise_linear({{0, 0}, {3.0 / 7, 0.4}, {4.0 / 7, 0.8}, {1, 1}});
    const EquilibriumSet set = best_response_scan_n2(d, 1.0, 5.0 / 7.0, 10000);
    Outcome out;
    const EquilibriumSegment* widest = nullptr;
    for (const auto& s : set.segments) {
      if (!widest || s.c1_upper - s.c1_lower > widest->c1_upper - widest->c1_lower) widest = &s;
      out.rows.push_back({{"c1_lower", s.c1_lower},
                          {"c1_upper", s.c1_upper},
                          {"c2_at_lower", 1.0 - s.c1_lower},
                          {"grid_points", s.grid_points}});
    }
    const bool ok = widest && std::abs(widest->c1_lower - 3.0 / 7.0) <= 2e-4 &&
                    std::abs(widest->c1_upper - 4.0 / 7.0) <= 2e-4 &&
                    set.contains(0.5, 0.5, 1e-9);
    for (auto& row : out.rows) {
      row["target_lower"] = 3.0 / 7.0;
      row["target_upper"] = 4.0 / 7.0;
      row["match"] = ok;
    }
    if (!ok) out.status = kExitMismatch;
    return out;
  }
  throw ValidationError(
      "tables: --name must be one of table1a, table1b, table2a, table2b, example3, appendixC");
}

inline Outcome cmd_prize_structure(const Options& o) {
  const CostDistribution d = parse_distribution(o.dist);
  Outcome out;
  if (!o.v.empty()) {
    const PrizeStructure v(vector_from_json(o.v, "--v"));
    const MultiEquilibriumResult eq = solve_threshold_multi(d, o.q, v, o.tol);
    out.rows.push_back({{"V", v.total()},
                        {"prizes", v.values()},
                        {"threshold", eq.threshold},
                        {"interior", eq.interior},
                        {"roots", eq.roots},
                        {"success_prob", eq.success_prob},
                        {"value", principal_value_multi(d, o.q, o.W, v)}});
    return out;
  }
  const int n = detail::integer_n(o.n);
  const OptimalStructure s = optimal_prize_structure(d, o.q, n, o.W, o.V);
  out.rows.push_back({{"W", o.W},
                      {"V", o.V},
                      {"n", n},
                      {"q", o.q},
                      {"threshold", s.threshold},
                      {"regime", std::string(to_string(s.regime))},
                      {"lambda", s.lambda},
                      {"prizes", s.structure.values()},
                      {"value", s.value},
                      {"achievable_lower", s.achievable.lower},
                      {"achievable_upper", s.achievable.upper},
                      {"W_lower", s.w_lower},
                      {"W_upper", std::isfinite(s.w_upper) ? Json(s.w_upper) : Json("inf")},
                      {"certified", s.certified}});
  return out;
}

inline Outcome cmd_expert(const Options& o) {
  const CostDistribution d = parse_distribution(o.dist);
  const ContestConfig cfg{o.n, o.q, o.V};
  const ExpertConfig ex{o.qe, detail::parse_mode(o.mode)};
  const ExpertEquilibrium e = solve_threshold_expert(d, cfg, ex, o.tol);
  const EquilibriumResult base = solve_threshold(d, cfg, o.tol);
  Json row{{"n", o.n},
           {"q", o.q},
           {"V", o.V},
           {"qe", o.qe},
           {"mode", o.mode},
           {"threshold", e.threshold},
           {"win_prob", e.win_prob},
           {"crowd_success", e.crowd_success},
           {"success_prob", e.success_prob},
           {"interior", e.interior},
           {"baseline_threshold", base.threshold},
           {"baseline_success_prob", base.success_prob}};
  try {
    row["critical_expertise"] = critical_expertise(d, cfg);
  } catch (const ValidationError&) {
    row["critical_expertise"] = nullptr;
  }
  Outcome out;
  out.rows.push_back(std::move(row));
  return out;
}

inline Outcome cmd_hetero(const Options& o, bool has_W) {
  const CostDistribution d = parse_distribution(o.dist);
  Outcome out;
  if (o.scan > 0) {
    const EquilibriumSet set = best_response_scan_n2(d, o.q, o.V, o.scan);
    for (const auto& s : set.segments) {
      out.rows.push_back({{"c1_lower", s.c1_lower},
                          {"c1_upper", s.c1_upper},
                          {"grid_points", s.grid_points}});
    }
    return out;
  }
  crowdsearch::detail::require(!o.qvec.empty(), "hetero: --qvec is required");
  const HeteroContest h(d, vector_from_json(o.qvec, "--qvec"), o.V);
  if (!has_W) {
    const ThresholdVector t = solve_thresholds(h);
    if (!t.converged) throw ConvergenceError("hetero: best-response iteration did not converge");
    const std::vector<double> c = h.to_input_order(t.c);
    const std::vector<double> q = h.to_input_order(h.q());
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t k = 0;
      while (h.order()[k] != i) ++k;
      out.rows.push_back({{"agent", i},
                          {"q", q[i]},
                          {"threshold", c[i]},
                          {"win_prob", psi_i_full(h, k, t.c)},
                          {"success_prob", success_probability_hetero(h, t.c)},
                          {"iterations", t.iterations},
                          {"max_residual", t.max_residual}});
    }
    return out;
  }
  const HeteroPrincipalResult r = solve_principal_hetero(h, o.W);
  const std::vector<double> c = h.to_input_order(r.thresholds.c);
  const std::vector<double> prizes = h.to_input_order(r.implied_prizes);
  const std::vector<double> cc = h.to_input_order(r.constrained_thresholds.c);
  const std::vector<double> q = h.to_input_order(h.q());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.rows.push_back({{"agent", i},
                        {"q", q[i]},
                        {"omega_threshold", c[i]},
                        {"implied_prize", prizes[i]},
                        {"prize_spread", r.prize_spread},
                        {"consistent", r.consistent},
                        {"constrained_prize", r.constrained_prize},
                        {"constrained_threshold", cc[i]},
                        {"constrained_value", r.constrained_value}});
  }
  return out;
}

inline Outcome cmd_asymptotics(const Options& o, bool has_W) {
  const CostDistribution d = parse_distribution(o.dist);
  std::vector<double> grid{1e2, 1e3, 1e4, 1e5, 1e6};
  if (!o.values.empty()) grid = vector_from_json(o.values, "--values");
  const LimitResult lim = large_contest_limit(d.lower(), o.q, o.V);
  const RateQuantity quantity = d.lower() > 0.0 ? RateQuantity::kCGap : RateQuantity::kCFProduct;
  const RateEstimate rate = estimate_rate(d, o.q, o.V, grid, quantity);
  Json row{{"q", o.q},
           {"V", o.V},
           {"regime", std::string(to_string(lim.regime))},
           {"kappa", std::isfinite(lim.kappa) ? Json(lim.kappa) : Json("inf")},
           {"p_infinity", lim.p_infinity},
           {"rate_quantity", std::string(to_string(quantity))},
           {"rate_slope", rate.fit.slope},
           {"rate_r_squared", rate.fit.r_squared}};
  // Threshold-alone slope, the usual headline rate.
  const RateEstimate gap = estimate_rate(d, o.q, o.V, grid, RateQuantity::kCGap);
  row["threshold_gap_slope"] = gap.fit.slope;
  if (has_W) row["prize_limit"] = optimal_prize_limit(d.lower(), o.q, o.W);
  Outcome out;
  out.rows.push_back(std::move(row));
  return out;
}

inline Outcome cmd_simulate(const Options& o) {
  const CostDistribution d = parse_distribution(o.dist);
  crowdsearch::detail::require(o.reps >= 1, "simulate: --reps must be >= 1");
  const ContestConfig cfg{static_cast<double>(detail::integer_n(o.n)), o.q, o.V};
  SimConfig sim;
  sim.replications = static_cast<std::size_t>(o.reps);
  sim.seed = o.seed;
  sim.threads = o.threads;
  if (o.variant == "baseline") {
    sim.variant = SimVariant::kBaseline;
  } else if (o.variant == "expert") {
    sim.variant = SimVariant::kExpert;
    sim.expert = {o.qe, detail::parse_mode(o.mode)};
  } else if (o.variant == "multiprize") {
    sim.variant = SimVariant::kMultiprize;
    crowdsearch::detail::require(!o.v.empty(), "simulate: multiprize needs --v");
    sim.prizes = vector_from_json(o.v, "--v");
  } else if (o.variant == "hetero") {
    sim.variant = SimVariant::kHetero;
    crowdsearch::detail::require(!o.qvec.empty(), "simulate: hetero needs --qvec");
    sim.q_vec = vector_from_json(o.qvec, "--qvec");
  } else {
    throw ValidationError("simulate: --variant must be baseline, expert, multiprize or hetero");
  }
  if (o.threshold) sim.thresholds = {*o.threshold};
  const SimEstimate est = simulate(d, cfg, sim);
  Json row = to_json(est);
  if (o.deviation) {
    const Estimate g = deviation_gain(d, cfg, sim, *o.deviation);
    row["deviation_cost"] = *o.deviation;
    row["deviation_gain"] = to_json(g);
  }
  Outcome out;
  out.rows.push_back(std::move(row));
  return out;
}

// ---- dispatch --------------------------------------------------------------

namespace detail {

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--dist", o.dist, "Cost distribution as JSON")->capture_default_str();
  sub->add_option("--q", o.q, "Discovery probability per searcher")->capture_default_str();
  sub->add_option("--V", o.V, "Prize")->capture_default_str();
  sub->add_option("--n", o.n, "Number of agents")->capture_default_str();
  sub->add_option("--W", o.W, "Principal's value of the object");
  sub->add_option("--qe", o.qe, "Expert's discovery probability")->capture_default_str();
  sub->add_option("--mode", o.mode, "Expert reward mode: shared|keep")->capture_default_str();
  sub->add_option("--qvec", o.qvec, "Per-agent discovery probabilities (JSON array)");
  sub->add_option("--v", o.v, "Prize per rank (JSON array)");
  sub->add_option("--tol", o.tol, "Root-finding tolerance")->capture_default_str();
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "Output path (default stdout)");
}

inline Json config_echo(const Options& o, const std::string& command) {
  Json c;
  try {
    c["dist"] = parse_json(o.dist, "--dist");
  } catch (const ValidationError&) {
    c["dist"] = o.dist;
  }
  c["q"] = o.q;
  c["V"] = o.V;
  c["n"] = o.n;
  c["W"] = o.W;
  c["tol"] = o.tol;
  if (command == "expert" || o.variant == "expert") {
    c["qe"] = o.qe;
    c["mode"] = o.mode;
  }
  if (!o.qvec.empty()) c["qvec"] = o.qvec;
  if (!o.v.empty()) c["v"] = o.v;
  if (command == "sweep") {
    c["over"] = o.over;
    c["values"] = o.values;
    c["target"] = o.target;
  }
  if (command == "tables") c["name"] = o.name;
  if (command == "simulate") {
    c["reps"] = o.reps;
    c["seed"] = o.seed;
    c["variant"] = o.variant;
  }
  return c;
}

}  // namespace detail

// Runs one command line. Output goes to `out` (or --out), diagnostics to `err`.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Crowdsearch contest solver", "crowdsearch"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Symmetric equilibrium threshold");
  auto* sweep = app.add_subcommand("sweep", "Equilibrium or optimal prize over a parameter grid");
  auto* tables = app.add_subcommand("tables", "Reproduce a named reference table");
  auto* principal = app.add_subcommand("principal", "Optimal single prize");
  auto* prize = app.add_subcommand("prize-structure", "Rank prizes: evaluate --v or optimize");
  auto* expert = app.add_subcommand("expert", "Equilibrium with a non-strategic expert");
  auto* hetero = app.add_subcommand("hetero", "Agents with different discovery probabilities");
  auto* asym = app.add_subcommand("asymptotics", "Large-crowd limits and convergence rates");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation of the game");
  for (auto* s : {solve, sweep, tables, principal, prize, expert, hetero, asym, sim}) {
    detail::add_common(s, o);
  }
  sweep->add_option("--over", o.over, "Parameter to vary: n|V|q|W")->capture_default_str();
  sweep->add_option("--values", o.values, "Grid as a JSON array")->required();
  sweep->add_option("--target", o.target, "equilibrium|principal")->capture_default_str();
  tables->add_option("--name", o.name, "table1a|table1b|table2a|table2b|example3|appendixC")
      ->required();
  hetero->add_option("--scan", o.scan, "Two-agent best-response scan with this many cells");
  asym->add_option("--values", o.values, "Grid of n for the rate fit (JSON array)");
  sim->add_option("--reps", o.reps, "Replications")->capture_default_str();
  sim->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sim->add_option("--variant", o.variant, "baseline|expert|multiprize|hetero")
      ->capture_default_str();
  sim->add_option("--threshold", o.threshold, "Common threshold to play (default: equilibrium)");
  sim->add_option("--deviation", o.deviation, "Also estimate the gain from searching at this cost");
  sim->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  const bool has_W = chosen->count("--W") > 0;
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    if (command == "solve") result = cmd_solve(o);
    if (command == "sweep") result = cmd_sweep(o);
    if (command == "tables") result = cmd_tables(o);
    if (command == "principal") result = cmd_principal(o);
    if (command == "prize-structure") result = cmd_prize_structure(o);
    if (command == "expert") result = cmd_expert(o);
    if (command == "hetero") result = cmd_hetero(o, has_W);
    if (command == "asymptotics") result = cmd_asymptotics(o, has_W);
    if (command == "simulate") result = cmd_simulate(o);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      err << "error: cannot open " << o.out << '\n';
      return kExitValidation;
    }
    sink = &file;
  }
  if (o.format == "json") {
    Json record;
    record["command"] = command;
    record["config"] = detail::config_echo(o, command);
    record["results"] = result.rows;
    record["version"] = kVersion;
    record["wall_time"] = wall;
    *sink << record.dump(2) << '\n';
  } else {
    detail::write_csv(*sink, result.rows);
  }
  if (result.status == kExitMismatch) err << "error: reproduction outside tolerance\n";
  return result.status;
}

}  // namespace crowdsearch::cli

#endif  // CROWDSEARCH_TOOLS_CROWDSEARCH_CLI_HPP_
