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

#include "polyce/adaptive.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "polyce/errors.h"
#include "polyce/finite_ce.h"
#include "polyce/game_io.h"
#include "polyce/sos.h"
#include "polyce/univariate.h"

namespace polyce {

void AdaptiveConfig::Validate() const {
  if (degenerate) {
    if (alpha != 1.0 || beta != 1.0) throw InputError("degenerate mode requires alpha = beta = 1");
  } else if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0)) {
    throw InputError("adaptive parameters must satisfy 0 <= alpha < beta <= 1");
  }
  if (!(eps_stop > 0.0)) throw InputError("eps_stop must be positive");
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (!(merge_tol > 0.0)) throw InputError("merge tolerance must be positive");
}

const char* AdaptiveStatusName(AdaptiveStatus status) {
  switch (status) {
    case AdaptiveStatus::kConverged: return "converged";
    case AdaptiveStatus::kMaxIterations: return "max_iterations";
    case AdaptiveStatus::kStalled: return "stalled";
  }
  return "unknown";
}

namespace {

// Result of one iteration's program, plus per-(player, recommendation)
// deviation maxima of the returned distribution.
struct Audit {
  std::vector<double> sums;
  // [player][grid index]: (eps_{i,s_i}, candidate deviations near the max)
  std::vector<std::vector<std::pair<double, std::vector<double>>>> recs;
};

struct Step {
  SupportedDistribution dist;
  double epsilon;
};

std::vector<double> Merge(const std::vector<double>& grid, const std::vector<double>& extra,
                          double tol, std::vector<double>& added) {
  std::vector<double> out = grid;
  for (double t : extra) {
    const bool known = std::any_of(out.begin(), out.end(),
                                   [&](double g) { return std::abs(g - t) <= tol; });
    if (!known) {
      out.push_back(t);
      added.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  std::sort(added.begin(), added.end());
  return out;
}

IterationTrace RunLoop(std::vector<std::vector<double>> grids, const AdaptiveConfig& config,
                       const std::function<Step(const ProductGrid&)>& solve,
                       const std::function<Audit(const SupportedDistribution&)>& audit) {
  config.Validate();
  for (auto& g : grids) g = NormalizeGrid(std::move(g));
  IterationTrace trace;
  std::vector<std::vector<double>> fresh = grids;
  for (int k = 0; k < config.max_iter; ++k) {
    const ProductGrid grid(grids);
    Step step = solve(grid);
    const Audit a = audit(step.dist);
    const double audited = *std::max_element(a.sums.begin(), a.sums.end());
    trace.iterations.push_back({k, grids, fresh, step.dist, step.epsilon, audited});
    if (audited <= config.eps_stop) {
      trace.status = AdaptiveStatus::kConverged;
      return trace;
    }
    // Players whose deviation budget attains beta * eps^k receive every
    // near-maximizing deviation of each recommendation that still gains.
    const double threshold = config.beta * audited - 1e-6 * std::max(1.0, audited);
    bool grew = false;
    for (size_t i = 0; i < grids.size(); ++i) {
      fresh[i].clear();
      if (a.sums[i] < threshold) continue;
      std::vector<double> candidates;
      for (const auto& [eps, maximizers] : a.recs[i]) {
        if (eps <= config.eps_stop) continue;
        candidates.insert(candidates.end(), maximizers.begin(), maximizers.end());
      }
      grids[i] = Merge(grids[i], candidates, config.merge_tol, fresh[i]);
      grew = grew || !fresh[i].empty();
    }
    if (!grew) {
      trace.status = AdaptiveStatus::kStalled;
      if (!config.degenerate) return trace;
    } else if (config.degenerate) {
      trace.status = AdaptiveStatus::kMaxIterations;
    }
  }
  if (trace.status != AdaptiveStatus::kStalled) trace.status = AdaptiveStatus::kMaxIterations;
  return trace;
}

Step SolveProgram(conic::ConicProblem& problem, const ProductGrid& grid,
                  const std::vector<conic::Var>& pi, conic::Var eps, double tol) {
  const conic::ConicSolution sol = conic::Solve(problem, tol);
  if (sol.status != conic::Status::kOptimal) {
    throw SolverError(std::string("adaptive iteration program: ") + conic::StatusName(sol.status));
  }
  std::vector<double> probs(pi.size());
  for (size_t c = 0; c < pi.size(); ++c) probs[c] = sol.Value(pi[c]);
  return {SupportedDistribution::FromApproximate(grid, std::move(probs), 1e-6),
          std::max(0.0, sol.Value(eps))};
}

}  // namespace

IterationSdp BuildIterationSdp(const PolynomialGame& game, const ProductGrid& grid, double alpha) {
  if (grid.num_players() != game.num_players()) {
    throw InputError("grid and game have different numbers of players");
  }
  IterationSdp sdp{conic::ConicProblem(), grid, {}, {}, {}};
  conic::ConicProblem& problem = sdp.problem;
  const int n = game.num_players();
  const std::size_t cells = grid.num_cells();
  sdp.pi = problem.AddScalarVars(static_cast<int>(cells));
  sdp.eps = problem.AddScalarVar();
  conic::LinExpr total;
  for (const conic::Var& v : sdp.pi) {
    problem.AddNonnegative(v);
    total += v;
  }
  problem.AddEquality(total, 1.0);

  std::vector<std::vector<double>> points(cells);
  for (std::size_t c = 0; c < cells; ++c) points[c] = grid.Point(c);
  for (int i = 0; i < n; ++i) {
    const MultiPoly& u = game.utility(i);
    const int degree = u.Degree(i);
    // g_{i,a}(t) coefficients, affine in pi.
    std::vector<std::vector<conic::LinExpr>> gain(grid.size(i),
                                                  std::vector<conic::LinExpr>(degree + 1));
    std::vector<double> base(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const std::vector<double> coeffs = u.RestrictToVariable(i, points[c]);
      base[c] = EvalUnivariate(coeffs, points[c][i]);
      const std::size_t a = grid.Coordinate(c, i);
      for (size_t k = 0; k < coeffs.size(); ++k) {
        const double v = k == 0 ? coeffs[0] - base[c] : coeffs[k];
        if (v != 0.0) gain[a][k] += v * conic::LinExpr(sdp.pi[c]);
      }
      if (coeffs.empty() && base[c] != 0.0) gain[a][0] -= base[c] * conic::LinExpr(sdp.pi[c]);
    }
    conic::LinExpr budget = sdp.eps;
    sdp.eps_rec.emplace_back();
    for (std::size_t a = 0; a < grid.size(i); ++a) {
      const conic::Var e = problem.AddScalarVar();
      sdp.eps_rec.back().push_back(e);
      budget -= e;
      std::vector<conic::LinExpr> p(degree + 1);
      for (int k = 0; k <= degree; ++k) p[k] = -gain[a][k];
      p[0] += e;
      for (auto& c : p) c.Compress();
      sos::IntervalNonnegConstraint(problem, p, degree);
    }
    problem.AddNonnegative(budget);
    if (alpha >= 1.0) continue;
    for (std::size_t a = 0; a < grid.size(i); ++a) {
      for (std::size_t b = 0; b < grid.size(i); ++b) {
        if (a == b) continue;
        const double t = grid.points(i)[b];
        conic::LinExpr restricted = alpha * conic::LinExpr(sdp.eps);
        for (int k = 0; k <= degree; ++k) restricted -= std::pow(t, k) * gain[a][k];
        restricted.Compress();
        problem.AddNonnegative(restricted);
      }
    }
  }
  problem.SetObjective(sdp.eps);
  return sdp;
}

IterationTrace RunAdaptive(const PolynomialGame& game,
                           const std::vector<std::vector<double>>& initial_grids,
                           const AdaptiveConfig& config) {
  if (static_cast<int>(initial_grids.size()) != game.num_players()) {
    throw InputError("need one initial grid per player");
  }
  const double alpha = config.degenerate ? 1.0 : config.alpha;
  auto solve = [&](const ProductGrid& grid) {
    IterationSdp sdp = BuildIterationSdp(game, grid, alpha);
    return SolveProgram(sdp.problem, grid, sdp.pi, sdp.eps, config.solver_tol);
  };
  auto audit = [&](const SupportedDistribution& dist) {
    Audit a;
    for (int i = 0; i < game.num_players(); ++i) {
      const std::vector<double> marginal = dist.Marginal(i);
      a.sums.push_back(0.0);
      a.recs.emplace_back();
      for (std::size_t s = 0; s < marginal.size(); ++s) {
        if (marginal[s] <= 0.0) continue;
        const UnivariateMax m = MaximizeUnivariate(DeviationGainCoefficients(game, i, dist, s));
        const double eps = std::max(0.0, m.value);
        a.sums.back() += eps;
        a.recs.back().emplace_back(eps, m.near_maximizers);
      }
    }
    return a;
  };
  return RunLoop(initial_grids, config, solve, audit);
}

IterationTrace RunAdaptiveFinite(const FiniteGame& game,
                                 const std::vector<std::vector<double>>& initial_subsets,
                                 const AdaptiveConfig& config) {
  const ProductGrid& full = game.grid();
  const int n = game.num_players();
  if (static_cast<int>(initial_subsets.size()) != n) {
    throw InputError("need one initial subset per player");
  }
  for (int i = 0; i < n; ++i) {
    for (double v : initial_subsets[i]) {
      if (!full.Find(i, v)) throw InputError("initial subset point is not a strategy of the game");
    }
  }
  // Full-grid cell of a restricted profile with player i's index replaced.
  auto full_cell = [&](const ProductGrid& grid, std::size_t cell, int player, std::size_t dev) {
    std::vector<std::size_t> idx(n);
    for (int j = 0; j < n; ++j) idx[j] = *full.Find(j, grid.points(j)[grid.Coordinate(cell, j)]);
    if (player >= 0) idx[player] = dev;
    return full.Flatten(idx);
  };
  const double alpha = config.degenerate ? 1.0 : config.alpha;

  auto solve = [&](const ProductGrid& grid) {
    conic::ConicProblem problem;
    const std::size_t cells = grid.num_cells();
    const std::vector<conic::Var> pi = problem.AddScalarVars(static_cast<int>(cells));
    const conic::Var eps = problem.AddScalarVar();
    conic::LinExpr total;
    for (const conic::Var& v : pi) {
      problem.AddNonnegative(v);
      total += v;
    }
    problem.AddEquality(total, 1.0);
    for (int i = 0; i < n; ++i) {
      conic::LinExpr budget = eps;
      for (std::size_t a = 0; a < grid.size(i); ++a) {
        const conic::Var e = problem.AddScalarVar();
        budget -= e;
        for (std::size_t t = 0; t < full.size(i); ++t) {
          conic::LinExpr gain;
          for (std::size_t c = 0; c < cells; ++c) {
            if (grid.Coordinate(c, i) != a) continue;
            const double diff =
                game.Payoff(i, full_cell(grid, c, i, t)) - game.Payoff(i, full_cell(grid, c, -1, 0));
            if (diff != 0.0) gain += diff * conic::LinExpr(pi[c]);
          }
          gain.Compress();
          if (gain.IsConstant()) continue;
          problem.AddNonnegative(conic::LinExpr(e) - gain);
          const bool restricted = grid.Find(i, full.points(i)[t]).has_value();
          if (alpha < 1.0 && restricted) problem.AddNonnegative(alpha * conic::LinExpr(eps) - gain);
        }
      }
      problem.AddNonnegative(budget);
    }
    problem.SetObjective(eps);
    return SolveProgram(problem, grid, pi, eps, config.solver_tol);
  };
  auto audit = [&](const SupportedDistribution& dist) {
    const ProductGrid& grid = dist.grid();
    Audit a;
    for (int i = 0; i < n; ++i) {
      const std::vector<double> marginal = dist.Marginal(i);
      a.sums.push_back(0.0);
      a.recs.emplace_back();
      for (std::size_t s = 0; s < marginal.size(); ++s) {
        if (marginal[s] <= 0.0) continue;
        std::vector<double> gains(full.size(i), 0.0);
        for (std::size_t c = 0; c < grid.num_cells(); ++c) {
          if (grid.Coordinate(c, i) != s || dist.Prob(c) == 0.0) continue;
          const double here = game.Payoff(i, full_cell(grid, c, -1, 0));
          for (std::size_t t = 0; t < full.size(i); ++t) {
            gains[t] += dist.Prob(c) * (game.Payoff(i, full_cell(grid, c, i, t)) - here);
          }
        }
        const double best = std::max(0.0, *std::max_element(gains.begin(), gains.end()));
        std::vector<double> near;
        for (std::size_t t = 0; t < gains.size(); ++t) {
          if (gains[t] >= best - 1e-6) near.push_back(full.points(i)[t]);
        }
        a.sums.back() += best;
        a.recs.back().emplace_back(best, near);
      }
    }
    return a;
  };
  return RunLoop(initial_subsets, config, solve, audit);
}

nlohmann::json TraceToJson(const IterationTrace& trace) {
  nlohmann::json j;
  j["status"] = AdaptiveStatusName(trace.status);
  nlohmann::json rows = nlohmann::json::array();
  for (const IterationRecord& r : trace.iterations) {
    rows.push_back({{"k", r.k},
                    {"epsilon", r.epsilon},
                    {"audited_epsilon", r.audited_epsilon},
                    {"grids", r.grids},
                    {"new_points", r.new_points},
                    {"distribution", DistributionToJson(r.dist)}});
  }
  j["iterations"] = rows;
  if (!trace.iterations.empty()) j["final"] = DistributionToJson(trace.last().dist);
  return j;
}

}  // namespace polyce
