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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "polyce/conic.h"
#include "polyce/errors.h"

namespace polyce::conic {
namespace {

void ExpectInvariants(const ConicSolution& sol) {
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_LE(sol.equality_residual, 1e-7);
  EXPECT_GE(sol.min_cone_eigenvalue, -1e-7);
  EXPECT_LE(std::abs(sol.objective_value - sol.dual_objective),
            1e-5 * (1.0 + std::abs(sol.objective_value)));
}

TEST(Conic, SinglePsdScalar) {
  ConicProblem p;
  const PsdBlock b = p.AddPsdBlock(1);
  p.SetObjective(b.Entry(0, 0));
  const ConicSolution sol = Solve(p, 1e-8);
  ExpectInvariants(sol);
  EXPECT_NEAR(sol.objective_value, 0.0, 1e-7);
}

TEST(Conic, TraceOneMinOffDiagonal) {
  ConicProblem p;
  const PsdBlock x = p.AddPsdBlock(2);
  p.AddEquality(x.Entry(0, 0) + x.Entry(1, 1), 1.0);
  p.SetObjective(x.Entry(0, 1));
  const ConicSolution sol = Solve(p, 1e-8);
  ExpectInvariants(sol);
  // Oracle: the feasible set is the convex hull of v v' with |v| = 1, so the
  // linear minimum is attained on that curve.
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const double th = M_PI * k / 100000.0;
    best = std::min(best, std::cos(th) * std::sin(th));
  }
  EXPECT_NEAR(sol.objective_value, best, 1e-6);
  EXPECT_NEAR(sol.objective_value, -0.5, 1e-6);
  const Eigen::MatrixXd xv = sol.Value(x);
  EXPECT_NEAR(xv.trace(), 1.0, 1e-7);
}

TEST(Conic, InfeasibleLmi) {
  ConicProblem p;
  const Var mu = p.AddScalarVar();
  p.AddEquality(mu, 2.0);
  SymExprMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(0, 1) = mu;
  p.AddLmi(m);
  EXPECT_EQ(Solve(p, 1e-8).status, Status::kInfeasible);
}

TEST(Conic, ScalarEquality) {
  ConicProblem p;
  const Var t = p.AddScalarVar();
  p.AddEquality(t - 1.0, 0.0);
  p.SetObjective(t);
  const ConicSolution sol = Solve(p, 1e-8);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.objective_value, 1.0, 1e-7);
  EXPECT_NEAR(sol.Value(t), 1.0, 1e-7);
}

TEST(Conic, UnboundedLp) {
  ConicProblem p;
  const Var t = p.AddScalarVar();
  p.AddNonnegative(t);
  p.SetObjective(-1.0 * t);
  EXPECT_EQ(Solve(p, 1e-8).status, Status::kUnbounded);
}

TEST(Conic, InfeasibleLp) {
  ConicProblem p;
  const Var t = p.AddScalarVar();
  p.AddNonnegative(t);
  p.AddEquality(t, -1.0);
  EXPECT_EQ(Solve(p, 1e-8).status, Status::kInfeasible);
}

TEST(Conic, RedundantEqualitiesAreTolerated) {
  ConicProblem p;
  const auto v = p.AddScalarVars(2);
  p.AddNonnegative(v[0]);
  p.AddNonnegative(v[1]);
  p.AddEquality(v[0] + v[1], 1.0);
  p.AddEquality(2.0 * v[0] + 2.0 * v[1], 2.0);
  p.SetObjective(v[0] - v[1]);
  const ConicSolution sol = Solve(p, 1e-8);
  ExpectInvariants(sol);
  EXPECT_NEAR(sol.objective_value, -1.0, 1e-7);
}

TEST(Conic, RejectsBadTolerance) {
  ConicProblem p;
  p.AddScalarVar();
  EXPECT_THROW(Solve(p, 0.0), InputError);
  EXPECT_THROW(Solve(p, 0.1), InputError);
}

// Random standard-form LPs against vertex enumeration.
TEST(Conic, LpMatchesVertexEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.1, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2, n = 5;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    }
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = w(rng);
    const Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = w(rng);  // c > 0 keeps the LP bounded

    ConicProblem p;
    const auto x = p.AddScalarVars(n);
    LinExpr obj;
    for (int j = 0; j < n; ++j) {
      p.AddNonnegative(x[j]);
      obj = obj + c(j) * x[j];
    }
    for (int i = 0; i < m; ++i) {
      LinExpr row;
      for (int j = 0; j < n; ++j) row = row + a(i, j) * x[j];
      p.AddEquality(row, b(i));
    }
    p.SetObjective(obj);
    const ConicSolution sol = Solve(p, 1e-9);
    ExpectInvariants(sol);

    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Eigen::Matrix2d basis;
        basis << a(0, j), a(0, k), a(1, j), a(1, k);
        if (std::abs(basis.determinant()) < 1e-12) continue;
        const Eigen::Vector2d xb = basis.lu().solve(b);
        if (xb.minCoeff() < -1e-12) continue;
        best = std::min(best, c(j) * xb(0) + c(k) * xb(1));
      }
    }
    EXPECT_NEAR(sol.objective_value, best, 1e-6 * (1.0 + std::abs(best)));
  }
}

// Random SDPs that are strictly feasible on both sides.
ConicProblem RandomSdp(std::mt19937_64& rng, int dim, int num_eq) {
  std::normal_distribution<double> nd;
  auto random_sym = [&]() {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) m(i, j) = nd(rng);
    }
    return Eigen::MatrixXd(0.5 * (m + m.transpose()));
  };
  ConicProblem p;
  const PsdBlock x = p.AddPsdBlock(dim);
  Eigen::MatrixXd x0 = random_sym();
  x0 = x0 * x0.transpose() + Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd c = random_sym();
  c = c * c.transpose() + Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < num_eq; ++k) {
    const Eigen::MatrixXd ak = random_sym();
    LinExpr row;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) row = row + ak(i, j) * x.Entry(i, j);
    }
    p.AddEquality(row, (ak.cwiseProduct(x0)).sum());
  }
  LinExpr obj;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) obj = obj + c(i, j) * x.Entry(i, j);
  }
  p.SetObjective(obj);
  return p;
}

TEST(Conic, WeakDualityAndRepeatability) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ConicProblem p = RandomSdp(rng, 2 + trial % 5, 1 + trial % 4);
    const ConicSolution a = Solve(p, 1e-8);
    ExpectInvariants(a);
    const ConicSolution b = Solve(p, 1e-8);
    EXPECT_NEAR(a.objective_value, b.objective_value, 1e-7);
  }
}

TEST(Conic, SvecRoundTrip) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 5, 6, 3, 6, 9;
  const Eigen::VectorXd v = Svec(m);
  ASSERT_EQ(v.size(), SvecSize(3));
  EXPECT_NEAR(v(SvecIndex(0, 1)), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v.squaredNorm(), m.squaredNorm(), 1e-12);
  EXPECT_TRUE(Smat(v, 3).isApprox(m));
}

TEST(Conic, DumpListsEveryEquality) {
  ConicProblem p;
  const Var t = p.AddScalarVar();
  p.AddEquality(t, 1.0);
  p.AddNonnegative(t);
  const std::string dump = p.DumpSdpa();
  EXPECT_NE(dump.find("eq 0 rhs 1"), std::string::npos) << dump;
}

}  // namespace
}  // namespace polyce::conic
