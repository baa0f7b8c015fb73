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

#include "polyce/univariate.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "polyce/kernels.h"
#include "polyce/multipoly.h"

namespace polyce {

namespace {

// Drops leading (highest-degree) coefficients that are negligible relative to
// the largest one, which would otherwise blow up the companion matrix.
std::vector<double> Trim(std::span<const double> coeffs) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  std::vector<double> out(coeffs.begin(), coeffs.end());
  while (!out.empty() && std::abs(out.back()) <= 1e-14 * scale) out.pop_back();
  return out;
}

}  // namespace

std::vector<double> RealRootsIn(std::span<const double> coeffs, double lo, double hi) {
  const std::vector<double> p = Trim(coeffs);
  std::vector<double> roots;
  if (p.size() < 2) return roots;
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<double> dp(n);
  for (int k = 1; k <= n; ++k) dp[k - 1] = k * p[k];

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const Eigen::VectorXcd eig = es.eigenvalues();

  const double width = hi - lo;
  for (int k = 0; k < n; ++k) {
    // Generous imaginary tolerance: double roots split into conjugate pairs
    // of size ~sqrt(eps), and spurious candidates are harmless to callers
    // that compare polynomial values.
    if (std::abs(eig(k).imag()) > 1e-5 * (1.0 + std::abs(eig(k)))) continue;
    double r = eig(k).real();
    for (int it = 0; it < 4; ++it) {
      const double f = EvalUnivariate(p, r);
      const double df = EvalUnivariate(dp, r);
      if (df == 0.0 || !std::isfinite(f / df)) break;
      const double next = r - f / df;
      if (!std::isfinite(next) || std::abs(next - r) > 1e-3 * (1.0 + std::abs(r))) break;
      r = next;
    }
    if (r < lo - 1e-9 * width || r > hi + 1e-9 * width) continue;
    roots.push_back(std::clamp(r, lo, hi));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              roots.end());
  return roots;
}

UnivariateMax MaximizeUnivariate(std::span<const double> coeffs, double near_tol) {
  const std::vector<double> p = Trim(coeffs);
  UnivariateMax out;
  if (p.size() <= 1) {
    out.t = -1.0;
    out.value = p.empty() ? 0.0 : p[0];
    out.near_maximizers = {-1.0, 1.0};
    return out;
  }
  std::vector<double> dp(p.size() - 1);
  for (size_t k = 1; k < p.size(); ++k) dp[k - 1] = static_cast<double>(k) * p[k];

  std::vector<double> candidates = RealRootsIn(dp, -1.0, 1.0);
  candidates.push_back(-1.0);
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                   candidates.end());

  std::vector<double> values(candidates.size());
  kernels::PolyEvalMany(p, candidates, values);
  const double best = *std::max_element(values.begin(), values.end());
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  out.value = best;
  bool have_t = false;
  for (size_t k = 0; k < candidates.size(); ++k) {
    if (!have_t && values[k] >= best - tie) {
      out.t = candidates[k];
      have_t = true;
    }
    if (values[k] >= best - near_tol) out.near_maximizers.push_back(candidates[k]);
  }
  return out;
}

}  // namespace polyce
