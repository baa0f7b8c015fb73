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

#include "polyce/sos.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "polyce/errors.h"

namespace polyce::sos {

namespace {

LinExpr CoeffOrZero(std::span<const LinExpr> coeffs, int k) {
  return k >= 0 && k < static_cast<int>(coeffs.size()) ? coeffs[k] : LinExpr();
}

void CheckDegree(std::span<const LinExpr> coeffs, int max_degree, const char* what) {
  for (int k = max_degree + 1; k < static_cast<int>(coeffs.size()); ++k) {
    LinExpr c = coeffs[k];
    c.Compress();
    if (!c.IsConstant() || c.constant() != 0.0) {
      throw InputError(std::string(what) + ": polynomial degree exceeds the certificate degree");
    }
  }
}

// Sum_{i+j=k} Q_ij over a (h+1)x(h+1) Gram block.
LinExpr Antidiagonal(const conic::PsdBlock& q, int k) {
  LinExpr e;
  const int h = q.dim() - 1;
  for (int i = std::max(0, k - h); i <= std::min(k, h); ++i) e += q.Entry(i, k - i);
  return e;
}

double AntidiagonalValue(const Eigen::MatrixXd& q, int k) {
  const int h = static_cast<int>(q.rows()) - 1;
  double v = 0.0;
  for (int i = std::max(0, k - h); i <= std::min(k, h); ++i) v += q(i, k - i);
  return v;
}

}  // namespace

conic::PsdBlock GramConstraint(ConicProblem& problem, std::span<const LinExpr> coeffs,
                               int half_degree) {
  if (half_degree < 0) throw InputError("Gram constraint: negative half degree");
  CheckDegree(coeffs, 2 * half_degree, "Gram constraint");
  conic::PsdBlock q = problem.AddPsdBlock(half_degree + 1);
  for (int k = 0; k <= 2 * half_degree; ++k) {
    problem.AddEquality(Antidiagonal(q, k) - CoeffOrZero(coeffs, k), 0.0);
  }
  return q;
}

IntervalBlocks IntervalNonnegConstraint(ConicProblem& problem, std::span<const LinExpr> coeffs,
                                        int degree) {
  if (degree < 0) throw InputError("interval constraint: negative degree");
  CheckDegree(coeffs, degree, "interval constraint");
  IntervalBlocks out;
  const int hs = (degree + 1) / 2;
  out.degree_s = 2 * hs;
  out.s = problem.AddPsdBlock(hs + 1);
  int top = out.degree_s;
  if (degree >= 1) {
    const int ht = (degree - 1) / 2;
    out.degree_t = 2 * ht;
    out.t = problem.AddPsdBlock(ht + 1);
    top = std::max(top, out.degree_t + 2);
  }
  for (int k = 0; k <= top; ++k) {
    LinExpr e = k <= out.degree_s ? Antidiagonal(out.s, k) : LinExpr();
    if (out.t) {
      if (k <= out.degree_t) e += Antidiagonal(*out.t, k);
      if (k >= 2 && k - 2 <= out.degree_t) e -= Antidiagonal(*out.t, k - 2);
    }
    problem.AddEquality(e - CoeffOrZero(coeffs, k), 0.0);
  }
  return out;
}

PolyMatrixExpr::PolyMatrixExpr(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || degree < 0) throw InputError("polynomial matrix needs dim >= 1, degree >= 0");
  coeffs_.resize(static_cast<size_t>(conic::SvecSize(dim)) * (degree + 1));
}

LinExpr& PolyMatrixExpr::at(int i, int j, int k) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || k < 0 || k > degree_) {
    throw InputError("polynomial matrix index out of range");
  }
  return coeffs_[conic::SvecIndex(i, j) * (degree_ + 1) + k];
}

const LinExpr& PolyMatrixExpr::at(int i, int j, int k) const {
  return const_cast<PolyMatrixExpr*>(this)->at(i, j, k);
}

MatrixIntervalBlocks MatrixPsdOnIntervalConstraint(ConicProblem& problem,
                                                   const PolyMatrixExpr& matrix) {
  const int m = matrix.dim();
  const int deg = matrix.degree();
  MatrixIntervalBlocks out;
  out.half_s = (deg + 1) / 2;
  out.s = problem.AddPsdBlock(m * (out.half_s + 1));
  if (deg >= 1) {
    out.half_t = (deg - 1) / 2;
    out.t = problem.AddPsdBlock(m * (out.half_t + 1));
  }
  // Coefficient of x_a x_b t^k (a <= b, off-diagonal counted once) of a
  // biform Gram matrix over basis x_a t^j.
  auto biform = [](const conic::PsdBlock& q, int h, int a, int b, int k) {
    LinExpr e;
    for (int j = std::max(0, k - h); j <= std::min(k, h); ++j) {
      e += q.Entry(a * (h + 1) + j, b * (h + 1) + (k - j));
    }
    return e;
  };
  const int top = std::max(2 * out.half_s, out.half_t >= 0 ? 2 * out.half_t + 2 : 0);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      for (int k = 0; k <= top; ++k) {
        LinExpr e = k <= 2 * out.half_s ? biform(out.s, out.half_s, a, b, k) : LinExpr();
        if (out.t) {
          if (k <= 2 * out.half_t) e += biform(*out.t, out.half_t, a, b, k);
          if (k >= 2 && k - 2 <= 2 * out.half_t) e -= biform(*out.t, out.half_t, a, b, k - 2);
        }
        if (k <= deg) e -= matrix.at(a, b, k);
        problem.AddEquality(e, 0.0);
      }
    }
  }
  return out;
}

std::vector<Exponent> GradedMonomials(int num_vars, int degree) {
  if (num_vars < 1 || degree < 0) throw InputError("monomial basis needs n >= 1, degree >= 0");
  std::vector<Exponent> out;
  Exponent e(num_vars, 0);
  // Exponents of one total degree in descending lexicographic order.
  auto emit = [&](auto&& self, int var, int remaining) -> void {
    if (var == num_vars - 1) {
      e[var] = remaining;
      out.push_back(e);
      return;
    }
    for (int p = remaining; p >= 0; --p) {
      e[var] = p;
      self(self, var + 1, remaining - p);
    }
  };
  for (int d = 0; d <= degree; ++d) emit(emit, 0, d);
  return out;
}

MomentVector MomentsOf(const SupportedDistribution& dist, int order) {
  const int n = dist.num_players();
  const std::vector<Exponent> exps = GradedMonomials(n, order);
  std::vector<double> values(exps.size(), 0.0);
  for (std::size_t cell = 0; cell < dist.grid().num_cells(); ++cell) {
    const double p = dist.Prob(cell);
    if (p == 0.0) continue;
    const std::vector<double> pt = dist.grid().Point(cell);
    for (size_t k = 0; k < exps.size(); ++k) {
      double v = p;
      for (int j = 0; j < n; ++j) v *= std::pow(pt[j], exps[k][j]);
      values[k] += v;
    }
  }
  return MomentVector(n, order, std::move(values));
}

MomentExprVector AddMomentVariables(ConicProblem& problem, int num_vars, int order) {
  const size_t count = GradedMonomials(num_vars, order).size();
  std::vector<LinExpr> values;
  for (size_t k = 0; k < count; ++k) values.emplace_back(problem.AddScalarVar());
  return MomentExprVector(num_vars, order, std::move(values));
}

MomentBlocks MomentFeasibilityConstraint(ConicProblem& problem, const MomentExprVector& mv) {
  const int r = mv.order() / 2;
  if (r < 1) throw InputError("moment feasibility needs order >= 2");
  const int n = mv.num_vars();
  auto add = [](const Exponent& a, const Exponent& b) {
    Exponent c = a;
    for (size_t j = 0; j < c.size(); ++j) c[j] += b[j];
    return c;
  };
  MomentBlocks out;
  const std::vector<Exponent> basis = GradedMonomials(n, r);
  conic::SymExprMatrix mm(static_cast<int>(basis.size()));
  for (size_t a = 0; a < basis.size(); ++a) {
    for (size_t b = a; b < basis.size(); ++b) {
      mm.at(static_cast<int>(a), static_cast<int>(b)) = mv.at(add(basis[a], basis[b]));
    }
  }
  out.moment_matrix = problem.AddLmi(mm);
  const std::vector<Exponent> low = GradedMonomials(n, r - 1);
  for (int i = 0; i < n; ++i) {
    Exponent two(n, 0);
    two[i] = 2;
    conic::SymExprMatrix loc(static_cast<int>(low.size()));
    for (size_t a = 0; a < low.size(); ++a) {
      for (size_t b = a; b < low.size(); ++b) {
        const Exponent ab = add(low[a], low[b]);
        loc.at(static_cast<int>(a), static_cast<int>(b)) = mv.at(ab) - mv.at(add(ab, two));
      }
    }
    out.localizing.push_back(problem.AddLmi(loc));
  }
  out.normalization_row = problem.AddEquality(mv.at(Exponent(n, 0)), 1.0);
  return out;
}

SosCertificate ExtractCertificate(const conic::ConicSolution& solution,
                                  const IntervalBlocks& blocks) {
  SosCertificate cert;
  cert.gram_s = solution.Value(blocks.s);
  cert.degree_s = blocks.degree_s;
  if (blocks.t) {
    cert.gram_t = solution.Value(*blocks.t);
    cert.degree_t = blocks.degree_t;
  }
  return cert;
}

std::vector<double> Reconstruct(const SosCertificate& cert) {
  const int ds = 2 * (static_cast<int>(cert.gram_s.rows()) - 1);
  const int dt = cert.gram_t ? 2 * (static_cast<int>(cert.gram_t->rows()) - 1) : -1;
  const int top = std::max({ds, dt >= 0 ? dt + 2 : 0, 0});
  std::vector<double> out(top + 1, 0.0);
  for (int k = 0; k <= ds; ++k) out[k] += AntidiagonalValue(cert.gram_s, k);
  if (cert.gram_t) {
    for (int k = 0; k <= dt; ++k) {
      const double v = AntidiagonalValue(*cert.gram_t, k);
      out[k] += v;
      out[k + 2] -= v;
    }
  }
  return out;
}

CertificateCheck VerifyCertificate(const SosCertificate& cert, std::span<const double> target,
                                   double tol) {
  CertificateCheck check;
  const std::vector<double> rec = cert.gram_s.size() > 0 ? Reconstruct(cert) : std::vector<double>{};
  const size_t len = std::max(rec.size(), target.size());
  for (size_t k = 0; k < len; ++k) {
    const double a = k < rec.size() ? rec[k] : 0.0;
    const double b = k < target.size() ? target[k] : 0.0;
    check.residual = std::max(check.residual, std::abs(a - b));
  }
  auto min_eig = [](const Eigen::MatrixXd& q) {
    if (q.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  check.min_eigenvalue = min_eig(cert.gram_s);
  if (cert.gram_t) check.min_eigenvalue = std::min(check.min_eigenvalue, min_eig(*cert.gram_t));
  check.min_grid_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 100; ++k) {
    check.min_grid_value =
        std::min(check.min_grid_value, EvalUnivariate(target, -1.0 + 2.0 * k / 100.0));
  }
  check.valid = check.residual <= tol && check.min_eigenvalue >= -1e-7 &&
                check.min_grid_value >= -1e-6;
  return check;
}

namespace {

nlohmann::json MatrixToJson(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const nlohmann::json& rows) {
  if (!rows.is_array()) throw InputError("certificate: Gram matrix must be an array of rows");
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
      throw InputError("certificate: Gram matrix must be square");
    }
    for (int j = 0; j < n; ++j) {
      if (!rows[i][j].is_number()) throw InputError("certificate: non-numeric Gram entry");
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace

std::string CertificateToJson(const SosCertificate& cert) {
  nlohmann::json j;
  j["degree_s"] = cert.degree_s;
  j["gram_s"] = MatrixToJson(cert.gram_s);
  j["degree_t"] = cert.degree_t;
  j["gram_t"] = cert.gram_t ? MatrixToJson(*cert.gram_t) : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

SosCertificate CertificateFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  if (!j.is_object() || !j.contains("gram_s")) throw InputError("certificate: missing gram_s");
  SosCertificate cert;
  cert.gram_s = MatrixFromJson(j["gram_s"]);
  cert.degree_s = j.value("degree_s", 2 * (static_cast<int>(cert.gram_s.rows()) - 1));
  if (j.contains("gram_t") && !j["gram_t"].is_null()) {
    cert.gram_t = MatrixFromJson(j["gram_t"]);
    cert.degree_t = j.value("degree_t", 2 * (static_cast<int>(cert.gram_t->rows()) - 1));
  }
  return cert;
}

}  // namespace polyce::sos
