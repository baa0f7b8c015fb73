// Copyright 2026 The polyce Authors.
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

// Subcommands:
//   static     CE of the midpoint-grid game for a sweep of d
//   adaptive   adaptive grid refinement trace
//   moments    payoff bounds and region sketch of the moment relaxation
//   randgame   seeded random polynomial game
//   audit      exact epsilon of emitted distributions
//
// CSV layouts (frozen):
//   static:  d,epsilon,u_<player>...
//   moments: dir_<player>...,u_<player>...   (one row per direction)
//   adaptive table (stdout, whitespace separated): k epsilon audited added

#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyce/adaptive.h"
#include "polyce/errors.h"
#include "polyce/finite_ce.h"
#include "polyce/game.h"
#include "polyce/game_io.h"
#include "polyce/kernels.h"
#include "polyce/moment_relaxation.h"
#include "polyce/random_game.h"

namespace polyce::cli {
namespace {

using nlohmann::json;

double ParseNumber(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(what + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw InputError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// "5" means 1..5, "5,10,20" an explicit list.
std::vector<int> ParseDegreeList(const std::string& spec, int lowest) {
  std::vector<int> out;
  const std::vector<std::string> parts = Split(spec, ',');
  if (parts.empty()) throw InputError("--d: empty value");
  for (const std::string& p : parts) {
    const double v = ParseNumber(p, "--d");
    if (v != static_cast<int>(v) || v < lowest) {
      throw InputError("--d: '" + p + "' must be an integer >= " + std::to_string(lowest));
    }
    out.push_back(static_cast<int>(v));
  }
  if (out.size() == 1 && lowest == 1) {
    const int top = out[0];
    out.clear();
    for (int d = 1; d <= top; ++d) out.push_back(d);
  }
  return out;
}

// "0" applies to every player; "-1;0,0.5" gives one list per player.
std::vector<std::vector<double>> ParseGrids(const std::string& spec, int num_players) {
  std::vector<std::vector<double>> grids;
  for (const std::string& group : Split(spec, ';')) {
    std::vector<double> pts;
    for (const std::string& p : Split(group, ',')) pts.push_back(ParseNumber(p, "--grid"));
    if (pts.empty()) throw InputError("--grid: empty strategy list");
    grids.push_back(pts);
  }
  if (grids.size() == 1) grids.resize(num_players, grids[0]);
  if (static_cast<int>(grids.size()) != num_players) {
    throw InputError("--grid: expected 1 or " + std::to_string(num_players) + " lists");
  }
  return grids;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("write failed: " + path);
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

struct Options {
  std::string game;
  std::string d = "1";
  std::optional<int> r;
  double alpha = 0.0;
  double beta = 1.0;
  std::optional<double> tol;
  double solver_tol = 1e-9;
  int max_iter = 50;
  std::string grid = "0";
  int directions = 16;
  std::uint64_t seed = 1;
  std::string out;
  bool degenerate = false;
  bool endpoints = false;
  int players = 3;
  int degree = 4;
  std::string input;
};

int CmdStatic(const Options& o, std::ostream& out) {
  const PolynomialGame game = LoadGameFile(o.game);
  const std::vector<int> ds = ParseDegreeList(o.d, 1);
  std::ostringstream csv;
  csv << "d,epsilon";
  for (const std::string& name : game.player_names()) csv << ",u_" << name;
  csv << "\n";
  json dists = json::array();
  for (int d : ds) {
    const StaticResult res = StaticDiscretization(game, d, {}, o.endpoints);
    csv << d << "," << FormatDouble(res.report.epsilon);
    for (double u : res.utilities) csv << "," << FormatDouble(u);
    csv << "\n";
    dists.push_back({{"d", d}, {"distribution", DistributionToJson(res.dist)}});
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    WriteFile(o.out, csv.str());
    WriteFile(o.out + ".dists.json", json({{"runs", dists}}).dump(2) + "\n");
  }
  return kExitOk;
}

int CmdAdaptive(const Options& o, std::ostream& out) {
  const PolynomialGame game = LoadGameFile(o.game);
  AdaptiveConfig cfg;
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;
  cfg.degenerate = o.degenerate;
  if (o.tol) cfg.eps_stop = *o.tol;
  cfg.max_iter = o.max_iter;
  cfg.solver_tol = o.solver_tol;
  const IterationTrace trace = RunAdaptive(game, ParseGrids(o.grid, game.num_players()), cfg);

  out << "k epsilon audited added\n";
  for (const IterationRecord& r : trace.iterations) {
    out << r.k << " " << FormatDouble(r.epsilon) << " " << FormatDouble(r.audited_epsilon) << " ";
    for (size_t i = 0; i < r.new_points.size(); ++i) {
      out << (i ? ";" : "") << "{";
      for (size_t j = 0; j < r.new_points[i].size(); ++j) {
        out << (j ? "," : "") << FormatDouble(r.new_points[i][j]);
      }
      out << "}";
    }
    out << "\n";
  }
  out << "status " << AdaptiveStatusName(trace.status) << "\n";
  if (!o.out.empty()) WriteFile(o.out, TraceToJson(trace).dump(2) + "\n");
  return kExitOk;
}

int CmdMoments(const Options& o, std::ostream& out) {
  const PolynomialGame game = LoadGameFile(o.game);
  const std::vector<int> ds = ParseDegreeList(o.d, 0);
  if (o.r && ds.size() != 1) throw InputError("--r needs a single --d");
  if (o.directions < 0) throw InputError("--directions must be nonnegative");
  const double tol = o.tol.value_or(1e-7);
  for (int d : ds) {
    const RelaxationOrder order = MakeOrder(game, d, o.r);
    const PayoffBox box = PayoffBounds(game, order, tol);
    const std::string box_json = PayoffBoxToJson(box, game.player_names());
    std::string csv;
    if (o.directions > 0) {
      csv = SketchToCsv(PayoffRegionSketch(game, order, o.directions, o.seed, tol),
                        game.player_names());
    }
    if (o.out.empty()) {
      out << box_json << csv;
    } else {
      const std::string prefix = o.out + "_d" + std::to_string(d);
      WriteFile(prefix + "_box.json", box_json);
      if (!csv.empty()) WriteFile(prefix + "_region.csv", csv);
      out << "d=" << d << " r=" << order.r << " -> " << prefix << "_box.json\n";
    }
  }
  return kExitOk;
}

int CmdRandgame(const Options& o, std::ostream& out) {
  const std::string text = SerializeGame(RandomGame(o.players, o.degree, o.seed));
  if (o.out.empty()) {
    out << text;
  } else {
    WriteFile(o.out, text);
  }
  return kExitOk;
}

// Accepts a distribution document, an adaptive trace ("final") or the
// static sweep companion file ("runs").
int CmdAudit(const Options& o, std::ostream& out) {
  const PolynomialGame game = LoadGameFile(o.game);
  json doc;
  try {
    doc = json::parse(ReadTextFile(o.input));
  } catch (const json::exception& e) {
    throw InputError(o.input + ": " + e.what());
  }
  std::vector<json> dists;
  if (doc.contains("support")) {
    dists.push_back(doc);
  } else if (doc.contains("final")) {
    dists.push_back(doc["final"]);
  } else if (doc.contains("runs") && doc["runs"].is_array()) {
    for (const json& run : doc["runs"]) {
      if (!run.contains("distribution")) throw InputError(o.input + ": run without distribution");
      dists.push_back(run["distribution"]);
    }
  } else {
    throw InputError(o.input + ": no distribution found");
  }
  json reports = json::array();
  for (const json& d : dists) {
    const SupportedDistribution dist = DistributionFromJson(d);
    if (dist.num_players() != game.num_players()) {
      throw InputError(o.input + ": distribution dimension does not match the game");
    }
    reports.push_back(json::parse(EpsilonReportToJson(MinEpsilon(game, dist))));
  }
  out << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlated equilibria of polynomial games"};
  app.require_subcommand(1);
  Options o;

  auto* st = app.add_subcommand("static", "CE of midpoint-grid discretizations");
  st->add_option("--game", o.game, "game JSON file")->required();
  st->add_option("--d", o.d, "grid size N (sweeps 1..N) or list d1,d2,...");
  st->add_flag("--endpoints", o.endpoints, "add -1 and 1 to every grid");
  st->add_option("--out", o.out, "CSV path; distributions go to <out>.dists.json");

  auto* ad = app.add_subcommand("adaptive", "adaptive grid refinement");
  ad->add_option("--game", o.game, "game JSON file")->required();
  ad->add_option("--grid", o.grid, "initial strategies, e.g. 0 or -1;0,0.5");
  ad->add_option("--alpha", o.alpha, "restricted-equilibrium factor");
  ad->add_option("--beta", o.beta, "new-strategy quality factor");
  ad->add_option("--tol", o.tol, "stop once epsilon falls to this value");
  ad->add_option("--solver-tol", o.solver_tol, "conic solver tolerance");
  ad->add_option("--max-iter", o.max_iter, "iteration limit");
  ad->add_flag("--degenerate", o.degenerate, "alpha = beta = 1 without restricted constraints");
  ad->add_option("--out", o.out, "JSON trace path");

  auto* mo = app.add_subcommand("moments", "moment relaxation payoff bounds");
  mo->add_option("--game", o.game, "game JSON file")->required();
  mo->add_option("--d", o.d, "test-function degree, or list d1,d2,...");
  mo->add_option("--r", o.r, "moment order (default: smallest valid)");
  mo->add_option("--directions", o.directions, "region sketch directions K (0 skips)");
  mo->add_option("--seed", o.seed, "direction seed for more than two players");
  mo->add_option("--tol", o.tol, "conic solver tolerance");
  mo->add_option("--out", o.out, "output prefix");

  auto* rg = app.add_subcommand("randgame", "random polynomial game");
  rg->add_option("--seed", o.seed, "generator seed")->required();
  rg->add_option("--players", o.players, "number of players");
  rg->add_option("--degree", o.degree, "total degree of the utilities");
  rg->add_option("--out", o.out, "game JSON path");

  auto* au = app.add_subcommand("audit", "exact epsilon of emitted distributions");
  au->add_option("--game", o.game, "game JSON file")->required();
  au->add_option("--input", o.input, "distribution, trace or .dists.json file")->required();

  std::string isa;
  app.add_option("--isa", isa, "kernel variant: scalar or avx2");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (!isa.empty()) {
      if (isa == "scalar") {
        kernels::SetIsa(kernels::Isa::kScalar);
      } else if (isa == "avx2") {
        if (!kernels::Avx2Available()) throw InputError("--isa avx2: not supported on this CPU");
        kernels::SetIsa(kernels::Isa::kAvx2);
      } else {
        throw InputError("--isa: expected scalar or avx2");
      }
    }
    if (st->parsed()) return CmdStatic(o, out);
    if (ad->parsed()) return CmdAdaptive(o, out);
    if (mo->parsed()) return CmdMoments(o, out);
    if (rg->parsed()) return CmdRandgame(o, out);
    return CmdAudit(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace polyce::cli
