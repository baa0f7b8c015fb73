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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "polyce/univariate.h"

namespace polyce {
namespace {

TEST(MaximizeUnivariate, Linear) {
  const UnivariateMax m = MaximizeUnivariate(std::vector<double>{0.0, 1.0});
  EXPECT_NEAR(m.t, 1.0, 1e-12);
  EXPECT_NEAR(m.value, 1.0, 1e-12);
}

TEST(MaximizeUnivariate, InteriorVertex) {
  const UnivariateMax m = MaximizeUnivariate(std::vector<double>{2.0, 0.0, -2.0});
  EXPECT_NEAR(m.t, 0.0, 1e-12);
  EXPECT_NEAR(m.value, 2.0, 1e-12);
}

TEST(MaximizeUnivariate, VertexOutsideInterval) {
  const UnivariateMax m = MaximizeUnivariate(std::vector<double>{0.0, 6.0, -2.0});
  EXPECT_NEAR(m.t, 1.0, 1e-12);
  EXPECT_NEAR(m.value, 4.0, 1e-12);
}

TEST(MaximizeUnivariate, TiesReportSmallestAndAllNearMaximizers) {
  // t^4 - t^2 peaks at both endpoints with value 0.
  const UnivariateMax m = MaximizeUnivariate(std::vector<double>{0.0, 0.0, -1.0, 0.0, 1.0});
  EXPECT_NEAR(m.t, -1.0, 1e-12);
  EXPECT_NEAR(m.value, 0.0, 1e-12);
  ASSERT_EQ(m.near_maximizers.size(), 3u);  // -1, 0 (local max, value 0), 1
  EXPECT_NEAR(m.near_maximizers.front(), -1.0, 1e-12);
  EXPECT_NEAR(m.near_maximizers.back(), 1.0, 1e-12);
}

TEST(MaximizeUnivariate, ConstantPolynomial) {
  const UnivariateMax m = MaximizeUnivariate(std::vector<double>{3.0});
  EXPECT_EQ(m.value, 3.0);
  EXPECT_EQ(m.t, -1.0);
}

TEST(MaximizeUnivariate, MatchesDenseScanOnRandomPolynomials) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> c(1 + trial % 9);
    for (double& x : c) x = nd(rng);
    const UnivariateMax m = MaximizeUnivariate(c);
    const oracle::GridMax g =
        oracle::DenseMax([&](double t) { return oracle::PowEvalUnivariate(c, t); });
    EXPECT_NEAR(m.value, g.value, 1e-9) << "trial " << trial;
    EXPECT_NEAR(oracle::PowEvalUnivariate(c, m.t), m.value, 1e-9);
    EXPECT_GE(m.value, g.value - 1e-9);
  }
}

TEST(RealRootsIn, FindsKnownRoots) {
  // (t - 0.5)(t + 0.25)(t - 3) = t^3 - 3.25 t^2 + 0.625 t + 0.375
  const std::vector<double> roots = RealRootsIn(std::vector<double>{0.375, 0.625, -3.25, 1.0}, -1, 1);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], -0.25, 1e-10);
  EXPECT_NEAR(roots[1], 0.5, 1e-10);
}

}  // namespace
}  // namespace polyce
