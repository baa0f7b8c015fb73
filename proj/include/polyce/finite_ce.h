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

#ifndef POLYCE_FINITE_CE_H_
#define POLYCE_FINITE_CE_H_

#include <string>
#include <vector>

#include "polyce/game.h"

namespace polyce {

// Objective of the correlated-equilibrium LP. kFeasibility selects among
// equilibria by minimizing the largest cell probability; kLinear minimizes
// weights . pi (one weight per grid cell).
struct CeObjective {
  enum class Kind { kFeasibility, kLinear };
  Kind kind = Kind::kFeasibility;
  std::vector<double> weights;
};

// A correlated equilibrium of a finite game:
//   sum_{s_-i} pi(s) [u_i(t_i, s_-i) - u_i(s)] <= 0 for all i, s_i, t_i,
// pi a probability vector. Throws SolverError if the LP solve fails.
SupportedDistribution CeLp(const FiniteGame& game, const CeObjective& objective = {},
                           double tol = 1e-9);

// Largest violation of the finite CE inequalities (0 for an exact CE).
double MaxCeViolation(const FiniteGame& game, const SupportedDistribution& dist);

struct RecommendationEpsilon {
  int player = 0;
  double recommendation = 0.0;
  double marginal = 0.0;
  double epsilon = 0.0;  // max_t g(t) over [-1,1], >= 0
  double argmax = 0.0;   // smallest maximizer
};

// epsilon = max_i sum_{s_i} eps_{i,s_i}; entries only for recommendations
// with positive marginal mass.
struct EpsilonReport {
  double epsilon = 0.0;
  std::vector<double> player_sums;
  std::vector<RecommendationEpsilon> entries;
};

// Exact smallest epsilon for which `dist` is an epsilon-correlated
// equilibrium of the continuous game, via root-finding on each deviation-gain
// polynomial.
EpsilonReport MinEpsilon(const PolynomialGame& game, const SupportedDistribution& dist);

std::string EpsilonReportToJson(const EpsilonReport& report);

// Centers of d equal subintervals of [-1,1]; optionally with +-1 added.
std::vector<double> MidpointGrid(int d, bool with_endpoints = false);

struct StaticResult {
  int d = 0;
  SupportedDistribution dist;
  EpsilonReport report;
  std::vector<double> utilities;
};

// CE of the game sampled on the midpoint grid, audited against the
// continuous game.
StaticResult StaticDiscretization(const PolynomialGame& game, int d,
                                  const CeObjective& objective = {},
                                  bool with_endpoints = false);

}  // namespace polyce

#endif  // POLYCE_FINITE_CE_H_
