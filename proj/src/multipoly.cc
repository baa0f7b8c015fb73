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

#include "polyce/multipoly.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyce/errors.h"

namespace polyce {

MultiPoly::MultiPoly(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1) throw InputError("polynomial needs at least one variable");
}

MultiPoly::MultiPoly(int num_vars, const std::map<Exponent, double>& terms)
    : MultiPoly(num_vars) {
  for (const auto& [exponent, coeff] : terms) AddTerm(exponent, coeff);
}

MultiPoly MultiPoly::Univariate(std::span<const double> coeffs) {
  MultiPoly p(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    p.AddTerm({static_cast<int>(k)}, coeffs[k]);
  }
  return p;
}

double MultiPoly::Coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0.0 : it->second;
}

void MultiPoly::AddTerm(const Exponent& exponent, double coeff) {
  if (static_cast<int>(exponent.size()) != num_vars_) {
    throw InputError("exponent tuple has " + std::to_string(exponent.size()) +
                     " entries, expected " + std::to_string(num_vars_));
  }
  if (std::any_of(exponent.begin(), exponent.end(), [](int e) { return e < 0; })) {
    throw InputError("negative exponent");
  }
  if (!std::isfinite(coeff)) throw InputError("non-finite coefficient");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::Evaluate(std::span<const double> point) const {
  double sum = 0.0;
  for (const auto& [exponent, coeff] : terms_) {
    double term = coeff;
    for (int j = 0; j < num_vars_; ++j) {
      for (int e = 0; e < exponent[j]; ++e) term *= point[j];
    }
    sum += term;
  }
  return sum;
}

int MultiPoly::Degree(int var) const {
  int degree = 0;
  for (const auto& [exponent, coeff] : terms_) degree = std::max(degree, exponent[var]);
  return degree;
}

int MultiPoly::TotalDegree() const {
  int degree = 0;
  for (const auto& [exponent, coeff] : terms_) {
    int total = 0;
    for (int e : exponent) total += e;
    degree = std::max(degree, total);
  }
  return degree;
}

std::vector<double> MultiPoly::RestrictToVariable(
    int var, std::span<const double> point) const {
  std::vector<double> coeffs(Degree(var) + 1, 0.0);
  for (const auto& [exponent, coeff] : terms_) {
    double term = coeff;
    for (int j = 0; j < num_vars_; ++j) {
      if (j == var) continue;
      for (int e = 0; e < exponent[j]; ++e) term *= point[j];
    }
    coeffs[exponent[var]] += term;
  }
  return coeffs;
}

std::vector<double> MultiPoly::DenseCoefficients() const {
  if (num_vars_ != 1) throw InputError("dense coefficients need a univariate polynomial");
  std::vector<double> coeffs(Degree(0) + 1, 0.0);
  for (const auto& [exponent, coeff] : terms_) coeffs[exponent[0]] = coeff;
  return coeffs;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.num_vars_ != num_vars_) throw InputError("variable count mismatch");
  for (const auto& [exponent, coeff] : other.terms_) AddTerm(exponent, coeff);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.num_vars_ != num_vars_) throw InputError("variable count mismatch");
  for (const auto& [exponent, coeff] : other.terms_) AddTerm(exponent, -coeff);
  return *this;
}

MultiPoly& MultiPoly::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [exponent, coeff] : terms_) coeff *= scale;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.num_vars_ != b.num_vars_) throw InputError("variable count mismatch");
  MultiPoly product(a.num_vars_);
  Exponent exponent(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int j = 0; j < a.num_vars_; ++j) exponent[j] = ea[j] + eb[j];
      product.AddTerm(exponent, ca * cb);
    }
  }
  return product;
}

double EvalUnivariate(std::span<const double> coeffs, double t) {
  double acc = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * t + coeffs[j];
  return acc;
}

}  // namespace polyce
