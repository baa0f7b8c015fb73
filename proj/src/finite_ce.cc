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

#include "polyce/finite_ce.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "polyce/conic.h"
#include "polyce/errors.h"
#include "polyce/univariate.h"

namespace polyce {

namespace {

// Calls fn(cell, deviated_cell) for every cell whose `player` coordinate is
// `rec`, pairing it with the same profile where the player plays `dev`.
template <typename Fn>
void ForEachDeviation(const ProductGrid& grid, int player, std::size_t rec, std::size_t dev,
                      Fn&& fn) {
  const std::size_t stride = grid.stride(player);
  for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
    if (grid.Coordinate(cell, player) != rec) continue;
    fn(cell, cell - rec * stride + dev * stride);
  }
}

}  // namespace

SupportedDistribution CeLp(const FiniteGame& game, const CeObjective& objective, double tol) {
  const ProductGrid& grid = game.grid();
  const std::size_t cells = grid.num_cells();
  if (objective.kind == CeObjective::Kind::kLinear && objective.weights.size() != cells) {
    throw InputError("CE objective needs one weight per grid cell");
  }
  conic::ConicProblem problem;
  const std::vector<conic::Var> pi = problem.AddScalarVars(static_cast<int>(cells));
  conic::LinExpr total;
  for (const conic::Var& v : pi) {
    problem.AddNonnegative(v);
    total += v;
  }
  problem.AddEquality(total, 1.0);
  for (int i = 0; i < game.num_players(); ++i) {
    for (std::size_t a = 0; a < grid.size(i); ++a) {
      for (std::size_t b = 0; b < grid.size(i); ++b) {
        if (a == b) continue;
        conic::LinExpr gain;
        ForEachDeviation(grid, i, a, b, [&](std::size_t cell, std::size_t dev) {
          const double diff = game.Payoff(i, dev) - game.Payoff(i, cell);
          if (diff != 0.0) gain += diff * conic::LinExpr(pi[cell]);
        });
        gain.Compress();
        if (!gain.IsConstant()) problem.AddNonnegative(-gain);
      }
    }
  }
  if (objective.kind == CeObjective::Kind::kLinear) {
    conic::LinExpr obj;
    for (std::size_t c = 0; c < cells; ++c) obj += objective.weights[c] * conic::LinExpr(pi[c]);
    problem.SetObjective(obj);
  } else if (cells > 1) {
    const conic::Var top = problem.AddScalarVar();
    for (const conic::Var& v : pi) problem.AddNonnegative(top - v);
    problem.SetObjective(top);
  }
  const conic::ConicSolution sol = conic::Solve(problem, tol);
  if (sol.status != conic::Status::kOptimal) {
    throw SolverError(std::string("correlated equilibrium LP: ") + conic::StatusName(sol.status));
  }
  std::vector<double> probs(cells);
  for (std::size_t c = 0; c < cells; ++c) probs[c] = sol.Value(pi[c]);
  return SupportedDistribution::FromApproximate(grid, std::move(probs), 1e-6);
}

double MaxCeViolation(const FiniteGame& game, const SupportedDistribution& dist) {
  const ProductGrid& grid = game.grid();
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (std::size_t a = 0; a < grid.size(i); ++a) {
      for (std::size_t b = 0; b < grid.size(i); ++b) {
        double gain = 0.0;
        ForEachDeviation(grid, i, a, b, [&](std::size_t cell, std::size_t dev) {
          gain += dist.Prob(cell) * (game.Payoff(i, dev) - game.Payoff(i, cell));
        });
        worst = std::max(worst, gain);
      }
    }
  }
  return worst;
}

EpsilonReport MinEpsilon(const PolynomialGame& game, const SupportedDistribution& dist) {
  if (dist.num_players() != game.num_players()) {
    throw InputError("distribution and game have different numbers of players");
  }
  EpsilonReport report;
  report.player_sums.assign(game.num_players(), 0.0);
  for (int i = 0; i < game.num_players(); ++i) {
    const std::vector<double> marginal = dist.Marginal(i);
    for (std::size_t a = 0; a < marginal.size(); ++a) {
      if (marginal[a] <= 0.0) continue;
      const std::vector<double> g = DeviationGainCoefficients(game, i, dist, a);
      const UnivariateMax best = MaximizeUnivariate(g);
      RecommendationEpsilon entry;
      entry.player = i;
      entry.recommendation = dist.grid().points(i)[a];
      entry.marginal = marginal[a];
      entry.epsilon = std::max(0.0, best.value);
      entry.argmax = best.t;
      report.player_sums[i] += entry.epsilon;
      report.entries.push_back(entry);
    }
    report.epsilon = std::max(report.epsilon, report.player_sums[i]);
  }
  return report;
}

std::string EpsilonReportToJson(const EpsilonReport& report) {
  nlohmann::json j;
  j["epsilon"] = report.epsilon;
  j["player_sums"] = report.player_sums;
  nlohmann::json entries = nlohmann::json::array();
  for (const RecommendationEpsilon& e : report.entries) {
    entries.push_back({{"player", e.player},
                       {"recommendation", e.recommendation},
                       {"marginal", e.marginal},
                       {"epsilon", e.epsilon},
                       {"argmax", e.argmax}});
  }
  j["per_recommendation"] = entries;
  return j.dump(2) + "\n";
}

std::vector<double> MidpointGrid(int d, bool with_endpoints) {
  if (d < 1) throw InputError("grid size d must be at least 1");
  std::vector<double> pts;
  for (int k = 0; k < d; ++k) pts.push_back(-1.0 + (2.0 * k + 1.0) / d);
  if (with_endpoints) {
    pts.push_back(-1.0);
    pts.push_back(1.0);
  }
  return NormalizeGrid(std::move(pts));
}

StaticResult StaticDiscretization(const PolynomialGame& game, int d, const CeObjective& objective,
                                  bool with_endpoints) {
  const std::vector<double> pts = MidpointGrid(d, with_endpoints);
  ProductGrid grid(std::vector<std::vector<double>>(game.num_players(), pts));
  const FiniteGame sampled = SampleGame(game, grid);
  StaticResult out{d, CeLp(sampled, objective), {}, {}};
  out.report = MinEpsilon(game, out.dist);
  out.utilities = ExpectedUtilities(game, out.dist);
  return out;
}

}  // namespace polyce
