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

#ifndef POLYCE_SOS_H_
#define POLYCE_SOS_H_

// Univariate and biform sum-of-squares encodings, plus truncated moment
// validity, all expressed as constraints on a conic::ConicProblem.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyce/conic.h"
#include "polyce/errors.h"
#include "polyce/game.h"
#include "polyce/multipoly.h"

namespace polyce::sos {

using conic::ConicProblem;
using conic::LinExpr;

// p(x) = z'Qz with z = (1, x, ..., x^d): the coefficient of x^k is the k-th
// antidiagonal sum of Q. coeffs are ascending and may be shorter than 2d+1.
conic::PsdBlock GramConstraint(ConicProblem& problem, std::span<const LinExpr> coeffs,
                               int half_degree);

// Gram blocks of p = s + (1 - x^2) t on [-1,1].
//   deg s = 2 ceil(D/2)        (block size ceil(D/2) + 1)
//   deg t = 2 floor((D-1)/2)   (block size floor((D-1)/2) + 1; absent for D = 0)
// For odd D both parts have degree D+1 and D-1; the leading coefficients of
// s and t then cancel in the identity.
struct IntervalBlocks {
  conic::PsdBlock s;
  std::optional<conic::PsdBlock> t;
  int degree_s = 0;
  int degree_t = -1;  // -1 when t is absent
};
IntervalBlocks IntervalNonnegConstraint(ConicProblem& problem, std::span<const LinExpr> coeffs,
                                        int degree);

// Symmetric matrix of univariate polynomials in t with affine coefficients.
class PolyMatrixExpr {
 public:
  PolyMatrixExpr(int dim, int degree);
  int dim() const { return dim_; }
  int degree() const { return degree_; }
  // Coefficient of t^k in entry (i, j); (i, j) and (j, i) alias.
  LinExpr& at(int i, int j, int k);
  const LinExpr& at(int i, int j, int k) const;

 private:
  int dim_;
  int degree_;
  std::vector<LinExpr> coeffs_;
};

// x'M(t)x = S(x,t) + (1 - t^2) T(x,t) with S, T sums of squares of
// biforms. S uses the basis x_a t^j (j <= ceil(D/2)), T the basis x_a t^j
// (j <= floor((D-1)/2)); basis index is a * (h + 1) + j.
struct MatrixIntervalBlocks {
  conic::PsdBlock s;
  std::optional<conic::PsdBlock> t;
  int half_s = 0;
  int half_t = -1;
};
MatrixIntervalBlocks MatrixPsdOnIntervalConstraint(ConicProblem& problem,
                                                   const PolyMatrixExpr& matrix);

// Exponents of total degree <= degree in n variables, graded lexicographic:
// by total degree, then lexicographically descending (x1 before x2).
std::vector<Exponent> GradedMonomials(int num_vars, int degree);

// Truncated moment sequence indexed by exponents of total degree <= order.
template <typename T>
class BasicMomentVector {
 public:
  BasicMomentVector() = default;
  BasicMomentVector(int num_vars, int order, std::vector<T> values)
      : num_vars_(num_vars), order_(order), exponents_(GradedMonomials(num_vars, order)),
        values_(std::move(values)) {
    if (values_.size() != exponents_.size()) {
      throw InputError("moment vector length does not match its order");
    }
    for (size_t k = 0; k < exponents_.size(); ++k) index_[exponents_[k]] = static_cast<int>(k);
  }
  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  const std::vector<Exponent>& exponents() const { return exponents_; }
  const std::vector<T>& values() const { return values_; }
  bool Has(const Exponent& e) const { return index_.count(e) > 0; }
  const T& at(const Exponent& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) throw InputError("moment exponent beyond truncation order");
    return values_[it->second];
  }

 private:
  int num_vars_ = 0;
  int order_ = 0;
  std::vector<Exponent> exponents_;
  std::vector<T> values_;
  std::map<Exponent, int> index_;
};

using MomentVector = BasicMomentVector<double>;
using MomentExprVector = BasicMomentVector<LinExpr>;

// Moments of total degree <= order of a finitely supported distribution.
MomentVector MomentsOf(const SupportedDistribution& dist, int order);

// One free scalar per moment of total degree <= order.
MomentExprVector AddMomentVariables(ConicProblem& problem, int num_vars, int order);

// Moment matrix M_r PSD, one localizing matrix for (1 - s_i^2) of order r-1
// per variable PSD, and mu_0 = 1, with r = order / 2 >= 1.
struct MomentBlocks {
  conic::ConeId moment_matrix;
  std::vector<conic::ConeId> localizing;
  int normalization_row = -1;
};
MomentBlocks MomentFeasibilityConstraint(ConicProblem& problem, const MomentExprVector& mv);

// Gram certificate of p = s + (1 - x^2) t.
struct SosCertificate {
  Eigen::MatrixXd gram_s;
  std::optional<Eigen::MatrixXd> gram_t;
  int degree_s = 0;
  int degree_t = -1;
};

SosCertificate ExtractCertificate(const conic::ConicSolution& solution,
                                  const IntervalBlocks& blocks);

struct CertificateCheck {
  bool valid = false;
  double residual = 0.0;         // max coefficient mismatch
  double min_eigenvalue = 0.0;   // over both Gram matrices
  double min_grid_value = 0.0;   // target on 101 uniform points
};
// Reconstructs s + (1 - x^2) t from antidiagonal sums and compares with
// `target` (ascending). Valid iff residual <= tol, Gram matrices are PSD
// within 1e-7 and the target is >= -1e-6 on the grid.
CertificateCheck VerifyCertificate(const SosCertificate& cert, std::span<const double> target,
                                   double tol = 1e-7);

// Ascending coefficients of s + (1 - x^2) t.
std::vector<double> Reconstruct(const SosCertificate& cert);

std::string CertificateToJson(const SosCertificate& cert);
SosCertificate CertificateFromJson(const std::string& text);

}  // namespace polyce::sos

#endif  // POLYCE_SOS_H_
