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

#include "polyce/moment_relaxation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "json.hpp"
#include "polyce/errors.h"

namespace polyce {

namespace {

// Numeric M_i(t) from constant coefficient expressions.
Eigen::MatrixXd EvalMatrix(const std::vector<std::vector<std::vector<conic::LinExpr>>>& m,
                           double t) {
  const int dim = static_cast<int>(m.size());
  Eigen::MatrixXd out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      double v = 0.0, p = 1.0;
      for (const conic::LinExpr& c : m[j][k]) {
        v += c.constant() * p;
        p *= t;
      }
      out(j, k) = v;
    }
  }
  return out;
}

double LargestEigen(const Eigen::MatrixXd& m, Eigen::VectorXd* vec = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const int last = static_cast<int>(m.rows()) - 1;
  if (vec != nullptr) *vec = es.eigenvectors().col(last);
  return es.eigenvalues()(last);
}

double SmallestEigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

constexpr double kRetryTol = 1e-5;

conic::ConicSolution SolveOrThrow(const conic::ConicProblem& problem, double tol,
                                  const char* what) {
  conic::ConicSolution sol = conic::Solve(problem, tol);
  // Relaxations with a thin feasible set converge slowly near the end; one
  // retry at a looser tolerance still bounds payoffs far below plotting
  // resolution.
  if (sol.status == conic::Status::kNumericalFailure && tol < kRetryTol) {
    sol = conic::Solve(problem, kRetryTol);
  }
  if (sol.status != conic::Status::kOptimal) {
    throw SolverError(std::string(what) + ": " + conic::StatusName(sol.status));
  }
  return sol;
}

}  // namespace

int MinimumMomentOrder(const PolynomialGame& game, int d) {
  if (d < 0) throw InputError("relaxation degree d must be nonnegative");
  int deg = 0;
  for (const MultiPoly& u : game.utilities()) deg = std::max(deg, u.TotalDegree());
  return std::max(1, (2 * d + deg + 1) / 2);
}

RelaxationOrder MakeOrder(const PolynomialGame& game, int d, std::optional<int> r) {
  const int r_min = MinimumMomentOrder(game, d);
  if (r && *r < r_min) {
    throw InputError("moment order r = " + std::to_string(*r) + " is below the minimum " +
                     std::to_string(r_min) + " for d = " + std::to_string(d));
  }
  return {d, r.value_or(r_min)};
}

std::vector<std::vector<std::vector<conic::LinExpr>>> DeviationMatrix(
    const PolynomialGame& game, int player, int d, const sos::MomentExprVector& moments) {
  const MultiPoly& u = game.utility(player);
  const int deg = u.Degree(player);
  std::vector<std::vector<std::vector<conic::LinExpr>>> m(
      d + 1, std::vector<std::vector<conic::LinExpr>>(d + 1, std::vector<conic::LinExpr>(deg + 1)));
  for (int j = 0; j <= d; ++j) {
    for (int k = j; k <= d; ++k) {
      for (const auto& [e, c] : u.terms()) {
        // c t^{e_i} s_i^{j+k} prod_{l != i} s_l^{e_l}  minus  c s_i^{e_i+j+k} prod ...
        Exponent shifted = e;
        shifted[player] = j + k;
        m[j][k][e[player]] += c * moments.at(shifted);
        shifted[player] = e[player] + j + k;
        m[j][k][0] -= c * moments.at(shifted);
      }
      for (auto& coeff : m[j][k]) coeff.Compress();
      m[k][j] = m[j][k];
    }
  }
  return m;
}

conic::LinExpr ExpectedUtilityExpr(const PolynomialGame& game, int player,
                                   const sos::MomentExprVector& moments) {
  conic::LinExpr e;
  for (const auto& [exp, c] : game.utility(player).terms()) e += c * moments.at(exp);
  return e.Compress();
}

Relaxation BuildRelaxation(const PolynomialGame& game, const RelaxationOrder& order) {
  const RelaxationOrder checked = MakeOrder(game, order.d, order.r);
  const int n = game.num_players();
  Relaxation rel{conic::ConicProblem(), checked, {}, {}, {}};
  rel.moments = sos::AddMomentVariables(rel.problem, n, 2 * checked.r);
  rel.moment_blocks = sos::MomentFeasibilityConstraint(rel.problem, rel.moments);
  for (int i = 0; i < n; ++i) {
    const auto m = DeviationMatrix(game, i, checked.d, rel.moments);
    const int deg = game.utility(i).Degree(i);
    sos::PolyMatrixExpr neg(checked.d + 1, deg);
    for (int j = 0; j <= checked.d; ++j) {
      for (int k = j; k <= checked.d; ++k) {
        for (int p = 0; p <= deg; ++p) neg.at(j, k, p) = -m[j][k][p];
      }
    }
    rel.players.push_back(sos::MatrixPsdOnIntervalConstraint(rel.problem, neg));
  }
  return rel;
}

PayoffBox PayoffBounds(const PolynomialGame& game, const RelaxationOrder& order, double tol) {
  const Relaxation rel = BuildRelaxation(game, order);
  PayoffBox box{rel.order, {}, {}};
  for (int i = 0; i < game.num_players(); ++i) {
    const conic::LinExpr payoff = ExpectedUtilityExpr(game, i, rel.moments);
    conic::ConicProblem lo = rel.problem;
    lo.SetObjective(payoff);
    box.lo.push_back(SolveOrThrow(lo, tol, "payoff lower bound").Value(payoff));
    conic::ConicProblem hi = rel.problem;
    hi.SetObjective(-payoff);
    box.hi.push_back(SolveOrThrow(hi, tol, "payoff upper bound").Value(payoff));
  }
  return box;
}

std::vector<SupportPoint> PayoffRegionSketch(const PolynomialGame& game,
                                             const RelaxationOrder& order, int directions,
                                             std::uint64_t seed, double tol) {
  if (directions < 3) throw InputError("payoff sketch needs at least 3 directions");
  const int n = game.num_players();
  const Relaxation rel = BuildRelaxation(game, order);
  std::vector<conic::LinExpr> payoff;
  for (int i = 0; i < n; ++i) payoff.push_back(ExpectedUtilityExpr(game, i, rel.moments));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SupportPoint> out;
  for (int k = 0; k < directions; ++k) {
    std::vector<double> dir(n, 0.0);
    if (n == 1) {
      dir[0] = k % 2 == 0 ? 1.0 : -1.0;
    } else if (n == 2) {
      const double angle = 2.0 * std::numbers::pi * k / directions;
      dir = {std::cos(angle), std::sin(angle)};
    } else {
      double norm = 0.0;
      while (norm < 1e-12) {
        norm = 0.0;
        for (double& v : dir) {
          v = normal(rng);
          norm += v * v;
        }
        norm = std::sqrt(norm);
      }
      for (double& v : dir) v /= norm;
    }
    conic::LinExpr objective;
    for (int i = 0; i < n; ++i) objective -= dir[i] * payoff[i];
    conic::ConicProblem problem = rel.problem;
    problem.SetObjective(objective);
    const conic::ConicSolution sol = SolveOrThrow(problem, tol, "payoff sketch");
    SupportPoint sp{dir, {}};
    for (int i = 0; i < n; ++i) sp.point.push_back(sol.Value(payoff[i]));
    out.push_back(std::move(sp));
  }
  return out;
}

MembershipResult CheckMomentMembership(const PolynomialGame& game, const RelaxationOrder& order,
                                       const sos::MomentVector& moments, double slack) {
  const RelaxationOrder checked = MakeOrder(game, order.d, order.r);
  const int n = game.num_players();
  if (moments.num_vars() != n || moments.order() != 2 * checked.r) {
    throw InputError("moment vector does not match the relaxation order");
  }
  std::vector<conic::LinExpr> constants(moments.values().begin(), moments.values().end());
  const sos::MomentExprVector fixed(n, moments.order(), std::move(constants));

  MembershipResult result;
  // Moment validity, checked directly on the numeric matrices.
  {
    conic::ConicProblem scratch;
    const sos::MomentBlocks blocks = sos::MomentFeasibilityConstraint(scratch, fixed);
    double worst = std::numeric_limits<double>::infinity();
    for (const conic::ConeRows& cone : scratch.cones()) {
      worst = std::min(worst, SmallestEigen(conic::Smat(cone.offset, cone.dim)));
    }
    result.min_moment_eigenvalue = worst;
    (void)blocks;
  }
  bool ok = result.min_moment_eigenvalue >= -slack &&
            std::abs(moments.at(Exponent(n, 0)) - 1.0) <= slack;

  int worst_player = -1;
  double worst_gamma = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::vector<std::vector<conic::LinExpr>>>> mats;
  for (int i = 0; i < n; ++i) {
    mats.push_back(DeviationMatrix(game, i, checked.d, fixed));
    const auto& m = mats.back();
    const int deg = game.utility(i).Degree(i);
    conic::ConicProblem problem;
    const conic::Var gamma = problem.AddScalarVar();
    sos::PolyMatrixExpr shifted(checked.d + 1, deg);
    for (int j = 0; j <= checked.d; ++j) {
      for (int k = j; k <= checked.d; ++k) {
        for (int p = 0; p <= deg; ++p) shifted.at(j, k, p) = -m[j][k][p];
      }
      shifted.at(j, j, 0) += gamma;
    }
    sos::MatrixPsdOnIntervalConstraint(problem, shifted);
    problem.SetObjective(gamma);
    const double g = SolveOrThrow(problem, 1e-9, "membership").Value(gamma);
    result.gamma.push_back(g);
    if (g > worst_gamma) {
      worst_gamma = g;
      worst_player = i;
    }
  }
  if (worst_gamma > slack) ok = false;
  result.member = ok;

  if (worst_gamma > slack) {
    // The worst deviation t maximizes the top eigenvalue of M_i(t); its
    // eigenvector is a test polynomial p with E[p^2 (u_i(t) - u_i)] > 0.
    const auto& m = mats[worst_player];
    auto top = [&](double t) { return LargestEigen(EvalMatrix(m, t)); };
    double best_t = -1.0, best = top(-1.0);
    for (int k = 1; k <= 1000; ++k) {
      const double t = -1.0 + 2.0 * k / 1000.0;
      const double v = top(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    double a = std::max(-1.0, best_t - 0.002), b = std::min(1.0, best_t + 0.002);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 60; ++it) {
      const double c = b - phi * (b - a), d = a + phi * (b - a);
      if (top(c) > top(d)) b = d; else a = c;
    }
    const double refined = 0.5 * (a + b);
    if (top(refined) > best) best_t = refined;
    Eigen::VectorXd v;
    const double value = LargestEigen(EvalMatrix(m, best_t), &v);
    result.separation = Separation{worst_player, best_t,
                                   std::vector<double>(v.data(), v.data() + v.size()), value};
  }
  return result;
}

double TestFunctionGain(const PolynomialGame& game, const SupportedDistribution& dist,
                        int player, double t, const std::vector<double>& test_poly) {
  double total = 0.0;
  for (const SupportedDistribution::Atom& atom : dist.Support()) {
    const double p = EvalUnivariate(test_poly, atom.point[player]);
    std::vector<double> dev = atom.point;
    dev[player] = t;
    total += atom.prob * p * p *
             (game.utility(player).Evaluate(dev) - game.utility(player).Evaluate(atom.point));
  }
  return total;
}

std::string PayoffBoxToJson(const PayoffBox& box, const std::vector<std::string>& names) {
  nlohmann::json j;
  j["d"] = box.order.d;
  j["r"] = box.order.r;
  nlohmann::json players = nlohmann::json::array();
  for (size_t i = 0; i < box.lo.size(); ++i) {
    players.push_back({{"name", i < names.size() ? names[i] : std::to_string(i)},
                       {"min", box.lo[i]},
                       {"max", box.hi[i]}});
  }
  j["players"] = players;
  return j.dump(2) + "\n";
}

std::string SketchToCsv(const std::vector<SupportPoint>& points,
                        const std::vector<std::string>& names) {
  std::ostringstream out;
  out.precision(10);
  for (size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << "dir_" << names[i];
  for (const std::string& name : names) out << ",u_" << name;
  out << "\n";
  for (const SupportPoint& sp : points) {
    for (size_t i = 0; i < sp.direction.size(); ++i) out << (i ? "," : "") << sp.direction[i];
    for (double v : sp.point) out << "," << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace polyce
