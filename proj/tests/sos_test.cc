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

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "oracles.h"
#include "polyce/conic.h"
#include "polyce/game.h"
#include "polyce/sos.h"

namespace polyce::sos {
namespace {

using conic::Solve;
using conic::Status;

std::vector<LinExpr> Constants(const std::vector<double>& c) {
  return std::vector<LinExpr>(c.begin(), c.end());
}

Status GramStatus(const std::vector<double>& p, int half) {
  ConicProblem prob;
  const auto c = Constants(p);
  GramConstraint(prob, c, half);
  return Solve(prob, 1e-9).status;
}

Status IntervalStatus(const std::vector<double>& p, SosCertificate* cert = nullptr) {
  ConicProblem prob;
  const auto c = Constants(p);
  const IntervalBlocks blocks = IntervalNonnegConstraint(prob, c, static_cast<int>(p.size()) - 1);
  const conic::ConicSolution sol = Solve(prob, 1e-9);
  if (sol.status == Status::kOptimal && cert != nullptr) *cert = ExtractCertificate(sol, blocks);
  return sol.status;
}

Status MatrixStatus(const PolyMatrixExpr& m) {
  ConicProblem prob;
  MatrixPsdOnIntervalConstraint(prob, m);
  return Solve(prob, 1e-9).status;
}

Status MomentStatus(int n, int order, const std::vector<double>& values) {
  ConicProblem prob;
  const MomentExprVector mv(n, order, std::vector<LinExpr>(values.begin(), values.end()));
  MomentFeasibilityConstraint(prob, mv);
  return Solve(prob, 1e-9).status;
}

// Polynomial product with ascending coefficients.
std::vector<double> Mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<double> Add(std::vector<double> a, const std::vector<double>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t k = 0; k < b.size(); ++k) a[k] += b[k];
  return a;
}

// Sum of `terms` squares of random polynomials of degree `half`.
std::vector<double> RandomSos(std::mt19937_64& rng, int half, int terms) {
  std::normal_distribution<double> nd;
  std::vector<double> out{0.0};
  for (int k = 0; k < terms; ++k) {
    std::vector<double> q(half + 1);
    for (double& x : q) x = nd(rng);
    out = Add(out, Mul(q, q));
  }
  return out;
}

TEST(Gram, SquareOfMonomial) {
  EXPECT_EQ(GramStatus({0.0, 0.0, 1.0}, 1), Status::kOptimal);
  SosCertificate cert;
  cert.gram_s = Eigen::Matrix2d{{0, 0}, {0, 1}};
  cert.degree_s = 2;
  EXPECT_TRUE(VerifyCertificate(cert, std::vector<double>{0.0, 0.0, 1.0}).valid);
}

TEST(Gram, PerfectSquare) {
  EXPECT_EQ(GramStatus({1.0, 2.0, 1.0}, 1), Status::kOptimal);
  SosCertificate cert;
  cert.gram_s = Eigen::Matrix2d{{1, 1}, {1, 1}};
  cert.degree_s = 2;
  EXPECT_TRUE(VerifyCertificate(cert, std::vector<double>{1.0, 2.0, 1.0}).valid);
}

TEST(Gram, NegativeConstantIsNotSos) {
  for (int half = 0; half <= 2; ++half) {
    std::vector<double> p(2 * half + 1, 0.0);
    p[0] = -1.0;
    EXPECT_EQ(GramStatus(p, half), Status::kInfeasible) << half;
  }
}

TEST(Interval, OneMinusSquare) {
  SosCertificate cert;
  ASSERT_EQ(IntervalStatus({1.0, 0.0, -1.0}, &cert), Status::kOptimal);
  EXPECT_TRUE(VerifyCertificate(cert, std::vector<double>{1.0, 0.0, -1.0}).valid);

  SosCertificate exact;
  exact.gram_s = Eigen::Matrix2d::Zero();
  exact.degree_s = 2;
  exact.gram_t = Eigen::MatrixXd::Ones(1, 1);
  exact.degree_t = 0;
  EXPECT_TRUE(VerifyCertificate(exact, std::vector<double>{1.0, 0.0, -1.0}).valid);
}

TEST(Interval, OnePlusXWitness) {
  EXPECT_EQ(IntervalStatus({1.0, 1.0}), Status::kOptimal);
  SosCertificate cert;
  cert.gram_s = Eigen::Matrix2d{{0.5, 0.5}, {0.5, 0.5}};
  cert.degree_s = 2;
  cert.gram_t = Eigen::MatrixXd::Constant(1, 1, 0.5);
  cert.degree_t = 0;
  const CertificateCheck check = VerifyCertificate(cert, std::vector<double>{1.0, 1.0});
  EXPECT_TRUE(check.valid);
  EXPECT_LE(check.residual, 1e-12);

  SosCertificate bad = cert;
  bad.gram_s(0, 0) += 0.1;
  EXPECT_FALSE(VerifyCertificate(bad, std::vector<double>{1.0, 1.0}).valid);
}

TEST(Interval, NegativeSomewhere) { EXPECT_EQ(IntervalStatus({-2.0, 1.0}), Status::kInfeasible); }

TEST(Interval, ZeroCertificateForZeroPolynomial) {
  SosCertificate cert;
  cert.gram_s = Eigen::MatrixXd::Zero(1, 1);
  cert.degree_s = 0;
  EXPECT_TRUE(VerifyCertificate(cert, std::vector<double>{0.0}).valid);
}

TEST(Interval, CertificateJsonRoundTrip) {
  SosCertificate cert;
  ASSERT_EQ(IntervalStatus({1.0, 0.3, 0.5, -0.2}, &cert), Status::kOptimal);
  const SosCertificate back = CertificateFromJson(CertificateToJson(cert));
  EXPECT_TRUE(back.gram_s.isApprox(cert.gram_s));
  ASSERT_TRUE(back.gram_t.has_value());
  EXPECT_TRUE(back.gram_t->isApprox(*cert.gram_t));
  EXPECT_EQ(back.degree_t, cert.degree_t);
}

TEST(Interval, CompletenessSoundnessAndReconstruction) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = deg(rng);
    // Markov-Lukacs shape of exact degree <= d.
    const int hs = d / 2;
    std::vector<double> p = RandomSos(rng, hs, 2);
    if (d >= 2) {
      const std::vector<double> t = RandomSos(rng, (d - 2) / 2, 2);
      p = Add(p, Mul({1.0, 0.0, -1.0}, t));
    }
    SosCertificate cert;
    ASSERT_EQ(IntervalStatus(p, &cert), Status::kOptimal) << "trial " << trial;
    const CertificateCheck check = VerifyCertificate(cert, p);
    EXPECT_TRUE(check.valid) << "trial " << trial << " residual " << check.residual;
    EXPECT_LE(check.residual, 1e-7);
    for (int k = 0; k <= 1000; ++k) {
      EXPECT_GE(oracle::PowEvalUnivariate(p, -1.0 + 2.0 * k / 1000.0), -1e-6);
    }
  }
}

TEST(Interval, RefutesPolynomialsWithNegativeValues) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  int refuted = 0;
  while (refuted < 200) {
    std::vector<double> p(1 + rng() % 7);
    for (double& x : p) x = nd(rng);
    double lo = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      lo = std::min(lo, oracle::PowEvalUnivariate(p, -1.0 + 2.0 * k / 1000.0));
    }
    if (lo > -1e-2) continue;
    EXPECT_EQ(IntervalStatus(p), Status::kInfeasible) << "min " << lo << " coeffs " << ::testing::PrintToString(p);
    ++refuted;
  }
}

TEST(MatrixInterval, Examples) {
  PolyMatrixExpr m(2, 1);
  m.at(0, 0, 0) = 1.0;
  m.at(1, 1, 0) = 1.0;
  m.at(0, 1, 1) = 1.0;
  EXPECT_EQ(MatrixStatus(m), Status::kOptimal);

  PolyMatrixExpr lin(1, 1);
  lin.at(0, 0, 1) = 1.0;
  EXPECT_EQ(MatrixStatus(lin), Status::kInfeasible);

  PolyMatrixExpr bump(1, 2);
  bump.at(0, 0, 0) = 1.0;
  bump.at(0, 0, 2) = -1.0;
  EXPECT_EQ(MatrixStatus(bump), Status::kOptimal);
}

TEST(Moments, GradedOrder) {
  const std::vector<Exponent> m = GradedMonomials(2, 2);
  const std::vector<Exponent> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(m, expected);
}

TEST(Moments, UnivariateExamples) {
  EXPECT_EQ(MomentStatus(1, 2, {1.0, 0.0, 1.0}), Status::kOptimal);
  EXPECT_EQ(MomentStatus(1, 2, {1.0, 0.0, 2.0}), Status::kInfeasible);
  EXPECT_EQ(MomentStatus(1, 2, {1.0, 0.0, 0.0}), Status::kOptimal);
}

TEST(Moments, FinitelySupportedMeasuresAreFeasible) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const int r = 1 + (trial / 3) % 3;
    std::vector<std::vector<double>> grids(n);
    for (auto& g : grids) {
      for (int k = 0; k < 2; ++k) g.push_back(u(rng));
      g = NormalizeGrid(g);
    }
    ProductGrid grid(grids);
    std::vector<double> p(grid.num_cells());
    double total = 0.0;
    for (double& x : p) total += (x = 0.1 + std::abs(u(rng)));
    for (double& x : p) x /= total;
    const MomentVector mv = MomentsOf(SupportedDistribution(grid, p), 2 * r);
    EXPECT_EQ(MomentStatus(n, 2 * r, mv.values()), Status::kOptimal)
        << "n " << n << " r " << r;
  }
}

}  // namespace
}  // namespace polyce::sos
