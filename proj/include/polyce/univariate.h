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

#ifndef POLYCE_UNIVARIATE_H_
#define POLYCE_UNIVARIATE_H_

#include <span>
#include <vector>

namespace polyce {

struct UnivariateMax {
  double t = -1.0;      // smallest global maximizer on [-1,1]
  double value = 0.0;   // global maximum on [-1,1]
  // Critical points and endpoints whose value is within `near_tol` of the
  // maximum, ascending.
  std::vector<double> near_maximizers;
};

// Global maximum of a polynomial (ascending coefficients) on [-1,1].
// Candidates are the endpoints and the real roots of p' found as eigenvalues
// of its companion matrix, polished by Newton steps. Constant polynomials
// report t = -1.
UnivariateMax MaximizeUnivariate(std::span<const double> coeffs,
                                 double near_tol = 1e-6);

// Real roots of a polynomial inside [lo, hi], ascending, deduplicated.
std::vector<double> RealRootsIn(std::span<const double> coeffs, double lo,
                                double hi);

}  // namespace polyce

#endif  // POLYCE_UNIVARIATE_H_
