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

#include "polyce/conic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "polyce/errors.h"

namespace polyce::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

int SvecSize(int dim) { return dim * (dim + 1) / 2; }

int SvecIndex(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

Eigen::VectorXd Svec(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd v(SvecSize(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      v(SvecIndex(i, j)) = i == j ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

Eigen::MatrixXd Smat(const Eigen::Ref<const Eigen::VectorXd>& v, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double value = v(SvecIndex(i, j));
      if (i == j) {
        m(i, i) = value;
      } else {
        m(i, j) = m(j, i) = value / kSqrt2;
      }
    }
  }
  return m;
}

const char* StatusName(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void LinExpr::AddTerm(int index, double coeff) {
  if (index < 0) throw InputError("linear expression refers to an unset variable");
  if (!std::isfinite(coeff)) throw InputError("non-finite coefficient in linear expression");
  if (coeff != 0.0) terms_.emplace_back(index, coeff);
}

LinExpr& LinExpr::Compress() {
  std::sort(terms_.begin(), terms_.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& [idx, c] : terms_) {
    if (!merged.empty() && merged.back().first == idx) {
      merged.back().second += c;
    } else {
      merged.emplace_back(idx, c);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  terms_ = std::move(merged);
  return *this;
}

double LinExpr::Evaluate(std::span<const double> x) const {
  double v = constant_;
  for (const auto& [idx, c] : terms_) v += c * x[idx];
  return v;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  if (terms_.size() > 64) Compress();
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& [idx, c] : other.terms_) terms_.emplace_back(idx, -c);
  constant_ -= other.constant_;
  if (terms_.size() > 64) Compress();
  return *this;
}

LinExpr& LinExpr::operator*=(double scale) {
  if (!std::isfinite(scale)) throw InputError("non-finite scale in linear expression");
  for (auto& t : terms_) t.second *= scale;
  constant_ *= scale;
  if (scale == 0.0) terms_.clear();
  return *this;
}

LinExpr PsdBlock::Entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw InputError("PSD block index out of range");
  LinExpr e;
  e.AddTerm(offset_ + SvecIndex(i, j), i == j ? 1.0 : 1.0 / kSqrt2);
  return e;
}

LinExpr& SymExprMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw InputError("matrix index out of range");
  return entries_[SvecIndex(i, j)];
}

const LinExpr& SymExprMatrix::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw InputError("matrix index out of range");
  return entries_[SvecIndex(i, j)];
}

Var ConicProblem::AddScalarVar() {
  ++num_scalar_vars_;
  return Var{num_atoms_++};
}

std::vector<Var> ConicProblem::AddScalarVars(int count) {
  std::vector<Var> vars;
  for (int k = 0; k < count; ++k) vars.push_back(AddScalarVar());
  return vars;
}

PsdBlock ConicProblem::AddPsdBlock(int dim) {
  if (dim < 1) throw InputError("PSD block dimension must be positive");
  PsdBlock block(static_cast<int>(blocks_.size()), dim, num_atoms_);
  num_atoms_ += SvecSize(dim);
  blocks_.push_back(block);
  ConeRows rows;
  rows.dim = dim;
  const int m = SvecSize(dim);
  rows.coeffs = Eigen::MatrixXd::Identity(m, m);
  rows.offset = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) rows.cols.push_back(block.offset_ + k);
  block_cones_.push_back(static_cast<int>(cones_.size()));
  cones_.push_back(std::move(rows));
  return block;
}

void ConicProblem::CheckExpr(const LinExpr& expr) const {
  if (!std::isfinite(expr.constant())) throw InputError("non-finite constant in expression");
  for (const auto& [idx, c] : expr.terms()) {
    if (idx >= num_atoms_) throw InputError("expression refers to a variable of another problem");
  }
}

int ConicProblem::AddEquality(const LinExpr& lhs, double rhs) {
  CheckExpr(lhs);
  if (!std::isfinite(rhs)) throw InputError("non-finite equality right-hand side");
  LinExpr e = lhs;
  e.Compress();
  equalities_.emplace_back(std::move(e), rhs);
  return static_cast<int>(equalities_.size()) - 1;
}

ConeId ConicProblem::AddNonnegative(const LinExpr& expr) {
  SymExprMatrix m(1);
  m.at(0, 0) = expr;
  return AddLmi(m);
}

ConeRows ConicProblem::Lower(const SymExprMatrix& matrix) const {
  const int dim = matrix.dim();
  const int m = SvecSize(dim);
  std::map<int, Eigen::VectorXd> columns;
  ConeRows rows;
  rows.dim = dim;
  rows.offset = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i <= j; ++i) {
      const LinExpr& e = matrix.at(i, j);
      CheckExpr(e);
      const int k = SvecIndex(i, j);
      const double scale = i == j ? 1.0 : kSqrt2;
      rows.offset(k) = scale * e.constant();
      for (const auto& [idx, c] : e.terms()) {
        auto it = columns.find(idx);
        if (it == columns.end()) it = columns.emplace(idx, Eigen::VectorXd::Zero(m)).first;
        it->second(k) += scale * c;
      }
    }
  }
  std::erase_if(columns, [](const auto& kv) { return kv.second.isZero(0.0); });
  rows.coeffs.resize(m, static_cast<int>(columns.size()));
  int col = 0;
  for (const auto& [idx, v] : columns) {
    rows.cols.push_back(idx);
    rows.coeffs.col(col++) = v;
  }
  return rows;
}

ConeId ConicProblem::AddLmi(const SymExprMatrix& matrix) {
  if (matrix.dim() < 1) throw InputError("LMI dimension must be positive");
  cones_.push_back(Lower(matrix));
  return ConeId{static_cast<int>(cones_.size()) - 1};
}

void ConicProblem::SetObjective(const LinExpr& objective) {
  CheckExpr(objective);
  objective_ = objective;
  objective_.Compress();
}

// Dump format, one record per line:
//   atoms <n> scalars <k> blocks <b> equalities <p> cones <q>
//   obj <const> then "obj <atom> <coeff>" per term
//   eq <row> rhs <b>, then "eq <row> <atom> <coeff>"
//   cone <id> dim <m>, then "cone <id> <i> <j> <atom|-1> <coeff>" where atom
//   -1 is the constant matrix; entries are plain matrix entries, not svec.
std::string ConicProblem::DumpSdpa() const {
  std::ostringstream out;
  out.precision(17);
  out << "atoms " << num_atoms_ << " scalars " << num_scalar_vars_ << " blocks "
      << blocks_.size() << " equalities " << equalities_.size() << " cones " << cones_.size()
      << "\n";
  out << "obj " << objective_.constant() << "\n";
  for (const auto& [idx, c] : objective_.terms()) out << "obj " << idx << " " << c << "\n";
  for (size_t r = 0; r < equalities_.size(); ++r) {
    out << "eq " << r << " rhs " << equalities_[r].second << "\n";
    for (const auto& [idx, c] : equalities_[r].first.terms()) {
      out << "eq " << r << " " << idx << " " << c << "\n";
    }
  }
  for (size_t q = 0; q < cones_.size(); ++q) {
    const ConeRows& cone = cones_[q];
    out << "cone " << q << " dim " << cone.dim << "\n";
    for (int j = 0; j < cone.dim; ++j) {
      for (int i = 0; i <= j; ++i) {
        const int k = SvecIndex(i, j);
        const double unscale = i == j ? 1.0 : 1.0 / kSqrt2;
        if (cone.offset(k) != 0.0) {
          out << "cone " << q << " " << i << " " << j << " -1 " << cone.offset(k) * unscale << "\n";
        }
        for (size_t c = 0; c < cone.cols.size(); ++c) {
          const double v = cone.coeffs(k, static_cast<int>(c));
          if (v != 0.0) {
            out << "cone " << q << " " << i << " " << j << " " << cone.cols[c] << " " << v * unscale
                << "\n";
          }
        }
      }
    }
  }
  return out.str();
}

Eigen::MatrixXd ConicSolution::Value(const PsdBlock& block) const {
  Eigen::MatrixXd m(block.dim(), block.dim());
  for (int i = 0; i < block.dim(); ++i) {
    for (int j = 0; j < block.dim(); ++j) m(i, j) = block.Entry(i, j).Evaluate(x);
  }
  return m;
}

}  // namespace polyce::conic
