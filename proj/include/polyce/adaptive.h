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

#ifndef POLYCE_ADAPTIVE_H_
#define POLYCE_ADAPTIVE_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "polyce/conic.h"
#include "polyce/game.h"

namespace polyce {

struct AdaptiveConfig {
  double alpha = 0.0;
  double beta = 1.0;
  double eps_stop = 1e-6;
  int max_iter = 50;
  double merge_tol = 1e-6;
  // alpha = beta = 1: the restricted-equilibrium constraint is dropped. Not
  // convergent in general; kept to reproduce stalling examples.
  bool degenerate = false;
  double solver_tol = 1e-9;

  // Throws InputError unless 0 <= alpha < beta <= 1 (or degenerate with
  // alpha = beta = 1), eps_stop > 0, max_iter >= 1, merge_tol > 0.
  void Validate() const;
};

enum class AdaptiveStatus { kConverged, kMaxIterations, kStalled };
const char* AdaptiveStatusName(AdaptiveStatus status);

struct IterationRecord {
  int k = 0;
  std::vector<std::vector<double>> grids;
  // Points of `grids` not present at iteration k-1 (all points for k = 0).
  std::vector<std::vector<double>> new_points;
  SupportedDistribution dist;
  double epsilon = 0.0;          // optimal value of the iteration program
  double audited_epsilon = 0.0;  // exact epsilon of `dist` on the full game
};

struct IterationTrace {
  std::vector<IterationRecord> iterations;
  AdaptiveStatus status = AdaptiveStatus::kMaxIterations;
  const IterationRecord& last() const { return iterations.back(); }
};

// Iteration program over a product grid: scalar pi(s) per cell,
// eps_{i,s_i}, eps; restricted deviations <= alpha eps (omitted for
// alpha >= 1, where they are implied); eps_{i,s_i} - g_{i,s_i}(t) >= 0 on
// [-1,1]; sum_{s_i} eps_{i,s_i} <= eps; pi in the simplex; minimize eps.
struct IterationSdp {
  conic::ConicProblem problem;
  ProductGrid grid;
  std::vector<conic::Var> pi;
  std::vector<std::vector<conic::Var>> eps_rec;  // [player][grid index]
  conic::Var eps;
};
IterationSdp BuildIterationSdp(const PolynomialGame& game, const ProductGrid& grid, double alpha);

// Algorithm for polynomial games. Initial grids must lie in [-1,1].
IterationTrace RunAdaptive(const PolynomialGame& game,
                           const std::vector<std::vector<double>>& initial_grids,
                           const AdaptiveConfig& config);

// Same loop on a finite game: deviations range over the full strategy sets
// and are maximized by enumeration. Initial subsets are given as strategy
// values of the full grid.
IterationTrace RunAdaptiveFinite(const FiniteGame& game,
                                 const std::vector<std::vector<double>>& initial_subsets,
                                 const AdaptiveConfig& config);

nlohmann::json TraceToJson(const IterationTrace& trace);

}  // namespace polyce

#endif  // POLYCE_ADAPTIVE_H_
