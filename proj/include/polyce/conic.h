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

#ifndef POLYCE_CONIC_H_
#define POLYCE_CONIC_H_

// Solver-agnostic conic problem builder.
//
//   minimize    c'x
//   subject to  linear equalities over x,
//               affine symmetric matrices of x positive semidefinite,
//
// where x collects free scalar variables and the entries of PSD variable
// blocks. A 1x1 affine PSD constraint is a linear inequality, so LPs are the
// special case with only diagonal blocks.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace polyce::conic {

// Free real variable.
struct Var {
  int index = -1;
};

// Affine expression sum_k coeff_k * x[index_k] + constant.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT: implicit by design of the algebra
  LinExpr(Var v) { AddTerm(v.index, 1.0); }          // NOLINT

  void AddTerm(int index, double coeff);
  double constant() const { return constant_; }
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  bool IsConstant() const { return terms_.empty(); }

  // Merges duplicate indices and drops zero coefficients.
  LinExpr& Compress();
  double Evaluate(std::span<const double> x) const;

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double scale);

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

// Namespace-scope so that Var and double operands convert implicitly.
inline LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
inline LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
inline LinExpr operator-(LinExpr a) { return a *= -1.0; }
inline LinExpr operator*(LinExpr a, double s) { return a *= s; }
inline LinExpr operator*(double s, LinExpr a) { return a *= s; }

// Symmetric matrix variable constrained PSD. Entry(i, j) == Entry(j, i).
class PsdBlock {
 public:
  PsdBlock() = default;
  int dim() const { return dim_; }
  int id() const { return id_; }
  LinExpr Entry(int i, int j) const;

 private:
  friend class ConicProblem;
  PsdBlock(int id, int dim, int offset) : id_(id), dim_(dim), offset_(offset) {}
  int id_ = -1;
  int dim_ = 0;
  int offset_ = 0;  // first svec slot in x
};

// Handle of an affine PSD constraint (including linear inequalities).
struct ConeId {
  int index = -1;
};

// Affine symmetric matrix given by its upper triangle, row i, column j >= i.
class SymExprMatrix {
 public:
  explicit SymExprMatrix(int dim) : dim_(dim), entries_(dim * (dim + 1) / 2) {}
  int dim() const { return dim_; }
  LinExpr& at(int i, int j);
  const LinExpr& at(int i, int j) const;

 private:
  int dim_;
  std::vector<LinExpr> entries_;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };
const char* StatusName(Status status);

// One affine PSD constraint after lowering: svec(M(x)) = h + sum_j x_j g_j,
// where svec scales off-diagonal entries by sqrt(2).
struct ConeRows {
  int dim = 0;
  std::vector<int> cols;   // atoms with a nonzero coefficient
  Eigen::MatrixXd coeffs;  // svec(M_j) per column, (dim(dim+1)/2) x cols
  Eigen::VectorXd offset;  // svec(M_0)
};

class ConicProblem {
 public:
  Var AddScalarVar();
  std::vector<Var> AddScalarVars(int count);
  PsdBlock AddPsdBlock(int dim);
  // lhs == rhs. Returns the row index used for dual lookup.
  int AddEquality(const LinExpr& lhs, double rhs = 0.0);
  // expr >= 0.
  ConeId AddNonnegative(const LinExpr& expr);
  // matrix is PSD.
  ConeId AddLmi(const SymExprMatrix& matrix);
  // Minimized. Defaults to 0 (feasibility).
  void SetObjective(const LinExpr& objective);

  int num_atoms() const { return num_atoms_; }
  int num_scalar_vars() const { return num_scalar_vars_; }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  int num_cones() const { return static_cast<int>(cones_.size()); }
  const std::vector<PsdBlock>& blocks() const { return blocks_; }
  const LinExpr& objective() const { return objective_; }
  const std::vector<std::pair<LinExpr, double>>& equalities() const { return equalities_; }
  const std::vector<ConeRows>& cones() const { return cones_; }
  // Cone that enforces PSD-ness of a variable block.
  ConeId BlockCone(const PsdBlock& block) const { return {block_cones_.at(block.id())}; }

  // Sparse SDPA-like text listing (format documented in conic.cc).
  std::string DumpSdpa() const;

 private:
  void CheckExpr(const LinExpr& expr) const;
  ConeRows Lower(const SymExprMatrix& matrix) const;

  int num_atoms_ = 0;
  int num_scalar_vars_ = 0;
  std::vector<PsdBlock> blocks_;
  std::vector<int> block_cones_;
  std::vector<std::pair<LinExpr, double>> equalities_;
  std::vector<ConeRows> cones_;
  LinExpr objective_;
};

struct SolverOptions {
  double tol = 1e-8;  // feasibility and gap tolerance, in (0, 1e-2]
  int max_iter = 100;
  bool verbose = false;
};

struct ConicSolution {
  Status status = Status::kNumericalFailure;
  std::vector<double> x;               // atom values
  std::vector<double> equality_duals;  // one per equality
  std::vector<Eigen::MatrixXd> cone_duals;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  double equality_residual = 0.0;  // inf-norm of equality violations
  double min_cone_eigenvalue = 0.0;

  double Value(Var v) const { return x.at(v.index); }
  double Value(const LinExpr& expr) const { return expr.Evaluate(x); }
  Eigen::MatrixXd Value(const PsdBlock& block) const;
};

// Default backend: homogeneous self-dual primal-dual interior-point method
// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps. Throws
// InputError on builder misuse or tol outside (0, 1e-2].
ConicSolution Solve(const ConicProblem& problem, const SolverOptions& options = {});
ConicSolution Solve(const ConicProblem& problem, double tol);

// svec helpers shared with the SOS layer.
int SvecSize(int dim);
int SvecIndex(int i, int j);  // i <= j or j <= i
Eigen::VectorXd Svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd Smat(const Eigen::Ref<const Eigen::VectorXd>& v, int dim);

}  // namespace polyce::conic

#endif  // POLYCE_CONIC_H_
