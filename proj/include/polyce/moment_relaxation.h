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

#ifndef POLYCE_MOMENT_RELAXATION_H_
#define POLYCE_MOMENT_RELAXATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyce/conic.h"
#include "polyce/game.h"
#include "polyce/sos.h"

namespace polyce {

// d: half-degree of the polynomial test functions; r: moments of total
// degree <= 2r are variables.
struct RelaxationOrder {
  int d = 0;
  int r = 1;
};

// Smallest r for which every entry of the deviation matrices is expressible:
// 2r >= 2d + max_i totaldeg(u_i), and r >= 1.
int MinimumMomentOrder(const PolynomialGame& game, int d);

// Order with r auto-computed, or checked against the minimum when given.
RelaxationOrder MakeOrder(const PolynomialGame& game, int d, std::optional<int> r = {});

struct Relaxation {
  conic::ConicProblem problem;
  RelaxationOrder order;
  sos::MomentExprVector moments;
  sos::MomentBlocks moment_blocks;
  std::vector<sos::MatrixIntervalBlocks> players;
};

// Moment variables y_e (total degree <= 2r) constrained to be a valid
// truncated moment sequence on [-1,1]^n, plus, for every player i,
//   -M_i(t) PSD for all t in [-1,1],
//   M_i(t)_{jk} = E[s_i^{j+k} (u_i(t, s_-i) - u_i(s))],  0 <= j,k <= d.
Relaxation BuildRelaxation(const PolynomialGame& game, const RelaxationOrder& order);

// Deviation matrix coefficients in the moments: result[j][k][m] is the t^m
// coefficient of entry (j, k) as an affine expression.
std::vector<std::vector<std::vector<conic::LinExpr>>> DeviationMatrix(
    const PolynomialGame& game, int player, int d, const sos::MomentExprVector& moments);

// E[u_i] as an affine expression in the moments.
conic::LinExpr ExpectedUtilityExpr(const PolynomialGame& game, int player,
                                   const sos::MomentExprVector& moments);

struct PayoffBox {
  RelaxationOrder order;
  std::vector<double> lo;
  std::vector<double> hi;
};

// Outer bounds on the expected utilities of all correlated equilibria.
PayoffBox PayoffBounds(const PolynomialGame& game, const RelaxationOrder& order,
                       double tol = 1e-7);

struct SupportPoint {
  std::vector<double> direction;
  std::vector<double> point;  // expected utilities at the maximizer
};

// Maximizes direction . E[u] over the relaxation for `directions` unit
// vectors: evenly spaced angles for two players, seeded Gaussian directions
// otherwise.
std::vector<SupportPoint> PayoffRegionSketch(const PolynomialGame& game,
                                             const RelaxationOrder& order, int directions,
                                             std::uint64_t seed = 1, double tol = 1e-7);

struct Separation {
  int player = -1;
  double t = 0.0;
  std::vector<double> test_poly;  // ascending coefficients of p(s_i)
  double violation = 0.0;         // E[p(s_i)^2 (u_i(t, s_-i) - u_i(s))] > 0
};

struct MembershipResult {
  bool member = false;
  // Per player: min gamma with gamma I - M_i(t) PSD on [-1,1].
  std::vector<double> gamma;
  double min_moment_eigenvalue = 0.0;  // over moment and localizing matrices
  std::optional<Separation> separation;
};

// Whether the fixed moments satisfy the relaxation, within `slack`.
MembershipResult CheckMomentMembership(const PolynomialGame& game, const RelaxationOrder& order,
                                       const sos::MomentVector& moments, double slack = 1e-6);

// E_pi[p(s_i)^2 (u_i(t, s_-i) - u_i(s))] by direct summation over atoms.
double TestFunctionGain(const PolynomialGame& game, const SupportedDistribution& dist,
                        int player, double t, const std::vector<double>& test_poly);

std::string PayoffBoxToJson(const PayoffBox& box, const std::vector<std::string>& names);
std::string SketchToCsv(const std::vector<SupportPoint>& points,
                        const std::vector<std::string>& names);

}  // namespace polyce

#endif  // POLYCE_MOMENT_RELAXATION_H_
