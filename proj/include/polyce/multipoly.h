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

#ifndef POLYCE_MULTIPOLY_H_
#define POLYCE_MULTIPOLY_H_

#include <map>
#include <span>
#include <vector>

namespace polyce {

// Exponent tuple of a monomial; entry j is the power of variable j.
using Exponent = std::vector<int>;

// Sparse real polynomial in a fixed number of variables. Zero coefficients
// are never stored, so two polynomials are equal iff their term maps are.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(int num_vars);
  // Duplicate-free term map; zero coefficients are dropped. Throws InputError
  // on arity mismatch, negative exponents or non-finite coefficients.
  MultiPoly(int num_vars, const std::map<Exponent, double>& terms);

  // Univariate polynomial from ascending coefficients.
  static MultiPoly Univariate(std::span<const double> coeffs);

  int num_vars() const { return num_vars_; }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool IsZero() const { return terms_.empty(); }

  double Coefficient(const Exponent& exponent) const;
  void AddTerm(const Exponent& exponent, double coeff);

  // Plain evaluation; no domain check.
  double Evaluate(std::span<const double> point) const;

  // Largest power of `var` over all terms (0 for the zero polynomial).
  int Degree(int var) const;
  int TotalDegree() const;

  // Ascending coefficients in `var` after fixing every other variable at the
  // corresponding entry of `point` (the entry for `var` itself is ignored).
  std::vector<double> RestrictToVariable(int var,
                                         std::span<const double> point) const;

  // Dense ascending coefficients of a univariate polynomial.
  std::vector<double> DenseCoefficients() const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(double scale);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
  friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) = default;

 private:
  int num_vars_ = 0;
  std::map<Exponent, double> terms_;
};

// Horner evaluation of ascending coefficients.
double EvalUnivariate(std::span<const double> coeffs, double t);

}  // namespace polyce

#endif  // POLYCE_MULTIPOLY_H_
