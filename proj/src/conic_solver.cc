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

// Homogeneous self-dual interior-point method for
//
//   minimize c'x  subject to  Ax = b,  Gx + s = h,  s in K,
//
// with K a product of one nonnegative orthant and PSD cones (svec form).
// Search directions use Nesterov-Todd scaling and a Mehrotra
// predictor-corrector step; the reduced KKT system is solved densely.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "polyce/conic.h"
#include "polyce/errors.h"

namespace polyce::conic {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kStepFraction = 0.99;
// Pure LPs above this size use the reduced system; the sparse augmented
// factorization fills in badly on dense equilibrium rows.
constexpr int kMaxAugmentedLp = 2000;

struct PsdCone {
  int dim = 0;
  int size = 0;    // svec length
  int offset = 0;  // position in the stacked s / z vectors
  int cone_id = 0;
  std::vector<int> cols;
  MatrixXd g;  // G restricted to cols
  VectorXd h;
};

struct Data {
  int n = 0;
  int p = 0;
  VectorXd c;
  double c0 = 0.0;
  SpMat a;
  VectorXd b;
  std::vector<int> eq_rows;  // problem row index per kept equality
  int nl = 0;
  SpMat gl;
  VectorXd hl;
  std::vector<int> nonneg_ids;
  std::vector<PsdCone> psd;
  int total = 0;  // stacked length of s and z
  double nu = 0.0;
};

// Lowers the builder into conelp form. Returns false when the equalities are
// inconsistent, which makes the problem trivially infeasible.
bool Prepare(const ConicProblem& problem, double tol, Data& data) {
  data.n = problem.num_atoms();
  data.c = VectorXd::Zero(data.n);
  data.c0 = problem.objective().constant();
  for (const auto& [idx, v] : problem.objective().terms()) data.c(idx) += v;

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs;
  for (int r = 0; r < problem.num_equalities(); ++r) {
    const auto& [lhs, value] = problem.equalities()[r];
    const double target = value - lhs.constant();
    if (lhs.terms().empty()) {
      if (std::abs(target) > tol * std::max(1.0, std::abs(value))) return false;
      continue;
    }
    const int row = static_cast<int>(rhs.size());
    for (const auto& [idx, v] : lhs.terms()) trip.emplace_back(row, idx, v);
    rhs.push_back(target);
    data.eq_rows.push_back(r);
  }
  {
    // Drop linearly dependent equalities; the reduced KKT matrix is singular
    // otherwise. An inconsistent dependent row makes the problem infeasible.
    const int rows = static_cast<int>(rhs.size());
    SpMat full(rows, data.n);
    full.setFromTriplets(trip.begin(), trip.end());
    std::vector<int> keep;
    if (rows > 0) {
      const MatrixXd at = MatrixXd(full).transpose();
      Eigen::ColPivHouseholderQR<MatrixXd> qr(at);
      qr.setThreshold(1e-10);
      const int rank = static_cast<int>(qr.rank());
      for (int k = 0; k < rank; ++k) keep.push_back(qr.colsPermutation().indices()(k));
      std::sort(keep.begin(), keep.end());
      if (rank < rows) {
        MatrixXd aug(data.n + 1, rows);
        aug.topRows(data.n) = at;
        aug.row(data.n) = Eigen::Map<const VectorXd>(rhs.data(), rows).transpose();
        Eigen::ColPivHouseholderQR<MatrixXd> qa(aug);
        qa.setThreshold(1e-10);
        if (qa.rank() > rank) {
          // Only a real inconsistency counts; b may simply be poorly scaled.
          const MatrixXd ak = at(Eigen::all, keep).transpose();
          const VectorXd bk = Eigen::Map<const VectorXd>(rhs.data(), rows)(keep);
          const VectorXd x0 = ak.completeOrthogonalDecomposition().solve(bk);
          const VectorXd res = full * x0 - Eigen::Map<const VectorXd>(rhs.data(), rows);
          const double scale = 1.0 + Eigen::Map<const VectorXd>(rhs.data(), rows).norm();
          if (res.norm() > std::sqrt(tol) * scale) return false;
        }
      }
    }
    std::vector<Eigen::Triplet<double>> kept_trip;
    std::vector<int> new_row(rows, -1);
    for (size_t k = 0; k < keep.size(); ++k) new_row[keep[k]] = static_cast<int>(k);
    for (const auto& tr : trip) {
      if (new_row[tr.row()] >= 0) kept_trip.emplace_back(new_row[tr.row()], tr.col(), tr.value());
    }
    std::vector<double> kept_rhs;
    std::vector<int> kept_ids;
    for (int k : keep) {
      kept_rhs.push_back(rhs[k]);
      kept_ids.push_back(data.eq_rows[k]);
    }
    trip = std::move(kept_trip);
    rhs = std::move(kept_rhs);
    data.eq_rows = std::move(kept_ids);
  }
  data.p = static_cast<int>(rhs.size());
  data.a.resize(data.p, data.n);
  data.a.setFromTriplets(trip.begin(), trip.end());
  data.b = Eigen::Map<VectorXd>(rhs.data(), data.p);

  trip.clear();
  std::vector<double> hl;
  int offset = 0;
  for (int q = 0; q < problem.num_cones(); ++q) {
    const ConeRows& cone = problem.cones()[q];
    if (cone.dim != 1) continue;
    const int row = static_cast<int>(hl.size());
    for (size_t k = 0; k < cone.cols.size(); ++k) {
      trip.emplace_back(row, cone.cols[k], -cone.coeffs(0, static_cast<int>(k)));
    }
    hl.push_back(cone.offset(0));
    data.nonneg_ids.push_back(q);
  }
  data.nl = static_cast<int>(hl.size());
  data.gl.resize(data.nl, data.n);
  data.gl.setFromTriplets(trip.begin(), trip.end());
  data.hl = Eigen::Map<VectorXd>(hl.data(), data.nl);
  offset = data.nl;
  data.nu = data.nl;
  for (int q = 0; q < problem.num_cones(); ++q) {
    const ConeRows& cone = problem.cones()[q];
    if (cone.dim == 1) continue;
    PsdCone pc;
    pc.dim = cone.dim;
    pc.size = SvecSize(cone.dim);
    pc.offset = offset;
    pc.cone_id = q;
    pc.cols = cone.cols;
    pc.g = -cone.coeffs;
    pc.h = cone.offset;
    offset += pc.size;
    data.nu += cone.dim;
    data.psd.push_back(std::move(pc));
  }
  data.total = offset;
  return true;
}

VectorXd GMul(const Data& d, const VectorXd& x) {
  VectorXd out(d.total);
  out.head(d.nl) = d.gl * x;
  for (const PsdCone& pc : d.psd) {
    VectorXd xs(pc.cols.size());
    for (size_t k = 0; k < pc.cols.size(); ++k) xs(k) = x(pc.cols[k]);
    out.segment(pc.offset, pc.size) = pc.g * xs;
  }
  return out;
}

VectorXd GtMul(const Data& d, const VectorXd& z) {
  VectorXd out = d.gl.transpose() * z.head(d.nl);
  for (const PsdCone& pc : d.psd) {
    const VectorXd part = pc.g.transpose() * z.segment(pc.offset, pc.size);
    for (size_t k = 0; k < pc.cols.size(); ++k) out(pc.cols[k]) += part(k);
  }
  return out;
}

VectorXd Hvec(const Data& d) {
  VectorXd h(d.total);
  h.head(d.nl) = d.hl;
  for (const PsdCone& pc : d.psd) h.segment(pc.offset, pc.size) = pc.h;
  return h;
}

VectorXd Identity(const Data& d) {
  VectorXd e = VectorXd::Zero(d.total);
  e.head(d.nl).setOnes();
  for (const PsdCone& pc : d.psd) {
    for (int i = 0; i < pc.dim; ++i) e(pc.offset + SvecIndex(i, i)) = 1.0;
  }
  return e;
}

// Smallest eigenvalue over all cones.
double MinEig(const Data& d, const VectorXd& v) {
  double m = std::numeric_limits<double>::infinity();
  if (d.nl > 0) m = v.head(d.nl).minCoeff();
  for (const PsdCone& pc : d.psd) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Smat(v.segment(pc.offset, pc.size), pc.dim),
                                               Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()(0));
  }
  return m;
}

struct PsdScaling {
  MatrixXd r, rinv, p;
  VectorXd lambda;
};

struct Scaling {
  VectorXd d;        // nonneg: sqrt(s / z)
  VectorXd lambda_l;  // nonneg: sqrt(s z)
  std::vector<PsdScaling> psd;
};

bool ComputeScaling(const Data& d, const VectorXd& s, const VectorXd& z, Scaling& w) {
  const auto sl = s.head(d.nl).array();
  const auto zl = z.head(d.nl).array();
  if (d.nl > 0 && (sl.minCoeff() <= 0.0 || zl.minCoeff() <= 0.0)) return false;
  w.d = (sl / zl).sqrt().matrix();
  w.lambda_l = (sl * zl).sqrt().matrix();
  w.psd.resize(d.psd.size());
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const PsdCone& pc = d.psd[k];
    Eigen::LLT<MatrixXd> ls(Smat(s.segment(pc.offset, pc.size), pc.dim));
    Eigen::LLT<MatrixXd> lz(Smat(z.segment(pc.offset, pc.size), pc.dim));
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    const MatrixXd l_s = ls.matrixL();
    const MatrixXd l_z = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(l_z.transpose() * l_s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sigma = svd.singularValues();
    if (sigma.minCoeff() <= 0.0) return false;
    const VectorXd isq = sigma.cwiseSqrt().cwiseInverse();
    PsdScaling& ps = w.psd[k];
    ps.r = l_s * svd.matrixV() * isq.asDiagonal();
    ps.rinv = isq.asDiagonal() * svd.matrixU().transpose() * l_z.transpose();
    ps.p = ps.r * ps.r.transpose();
    ps.lambda = sigma;
  }
  return true;
}

// Scaled-space vectors are kept as full symmetric matrices per PSD cone.
struct Scaled {
  VectorXd l;
  std::vector<MatrixXd> m;
};

Scaled ToScaled(const Data& d, const VectorXd& v) {
  Scaled out;
  out.l = v.head(d.nl);
  for (const PsdCone& pc : d.psd) out.m.push_back(Smat(v.segment(pc.offset, pc.size), pc.dim));
  return out;
}

// lambda \ rc as a stacked svec vector in scaled coordinates.
VectorXd LambdaDiv(const Data& d, const Scaling& w, const Scaled& rc) {
  VectorXd out(d.total);
  out.head(d.nl) = rc.l.cwiseQuotient(w.lambda_l);
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const PsdCone& pc = d.psd[k];
    const VectorXd& lam = w.psd[k].lambda;
    MatrixXd x = rc.m[k];
    for (int i = 0; i < pc.dim; ++i) {
      for (int j = 0; j < pc.dim; ++j) x(i, j) *= 2.0 / (lam(i) + lam(j));
    }
    out.segment(pc.offset, pc.size) = Svec(x);
  }
  return out;
}

// v -> W' v: scaled coordinates back to unscaled s-space.
VectorXd ApplyWt(const Data& d, const Scaling& w, const VectorXd& v) {
  VectorXd out(d.total);
  out.head(d.nl) = v.head(d.nl).cwiseProduct(w.d);
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const PsdCone& pc = d.psd[k];
    const MatrixXd& r = w.psd[k].r;
    out.segment(pc.offset, pc.size) =
        Svec(r * Smat(v.segment(pc.offset, pc.size), pc.dim) * r.transpose());
  }
  return out;
}

// Largest step keeping lambda + alpha * v in the cone (scaled space).
double MaxStep(const Data& d, const Scaling& w, const Scaled& v) {
  double step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d.nl; ++i) {
    if (v.l(i) < 0.0) step = std::min(step, -w.lambda_l(i) / v.l(i));
  }
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const VectorXd isq = w.psd[k].lambda.cwiseSqrt().cwiseInverse();
    const MatrixXd m = isq.asDiagonal() * v.m[k] * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    const double e = es.eigenvalues()(0);
    if (e < 0.0) step = std::min(step, -1.0 / e);
  }
  return step;
}

Scaling IdentityScaling(const Data& d) {
  Scaling w;
  w.d = VectorXd::Ones(d.nl);
  w.lambda_l = VectorXd::Ones(d.nl);
  for (const PsdCone& pc : d.psd) {
    PsdScaling ps;
    ps.r = ps.rinv = ps.p = MatrixXd::Identity(pc.dim, pc.dim);
    ps.lambda = VectorXd::Ones(pc.dim);
    w.psd.push_back(std::move(ps));
  }
  return w;
}

// v -> W^{-T} v.
VectorXd ApplyWinvT(const Data& d, const Scaling& w, const VectorXd& v) {
  VectorXd out(d.total);
  out.head(d.nl) = v.head(d.nl).cwiseQuotient(w.d);
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const PsdCone& pc = d.psd[k];
    const MatrixXd& r = w.psd[k].rinv;
    out.segment(pc.offset, pc.size) =
        Svec(r * Smat(v.segment(pc.offset, pc.size), pc.dim) * r.transpose());
  }
  return out;
}

// u -> W^{-1} u.
VectorXd ApplyWinv(const Data& d, const Scaling& w, const VectorXd& u) {
  VectorXd out(d.total);
  out.head(d.nl) = u.head(d.nl).cwiseQuotient(w.d);
  for (size_t k = 0; k < d.psd.size(); ++k) {
    const PsdCone& pc = d.psd[k];
    const MatrixXd& r = w.psd[k].rinv;
    out.segment(pc.offset, pc.size) =
        Svec(r.transpose() * Smat(u.segment(pc.offset, pc.size), pc.dim) * r);
  }
  return out;
}

bool UseAugmented(const Data& d) { return !d.psd.empty() || d.total <= kMaxAugmentedLp; }

// Scaled KKT system in u = W dz with Gs = W^{-T} G:
//   [0 A' Gs'; A 0 0; Gs 0 -I] [dx; dy; u] = [r1; r2; W^{-T} r3].
// By default the whole system goes to a sparse LU; forming Gs'Gs squares
// the condition number, which near the boundary costs more accuracy than
// refinement can recover. Large LPs eliminate u and factor [Gs'Gs A'; A 0]
// densely instead.
// Iterative refinement runs against the unscaled system in both cases.
class Kkt {
 public:
  Kkt(const Data& d, const Scaling& w) : d_(d), w_(w) {
    const int n = d.n;
    gl_ = SpMat(w.d.cwiseInverse().asDiagonal() * d.gl);
    for (size_t k = 0; k < d.psd.size(); ++k) {
      const PsdCone& pc = d.psd[k];
      MatrixXd gs(pc.size, pc.cols.size());
      const MatrixXd& r = w.psd[k].rinv;
      for (int col = 0; col < static_cast<int>(pc.cols.size()); ++col) {
        gs.col(col) = Svec(r * Smat(pc.g.col(col), pc.dim) * r.transpose());
      }
      gs_.push_back(std::move(gs));
    }
    const MatrixXd a = MatrixXd(d.a);
    augmented_ = UseAugmented(d);
    if (augmented_) {
      const int m = n + d.p + d.total;
      std::vector<Eigen::Triplet<double>> trip;
      auto add = [&](int i, int j, double v) {
        trip.emplace_back(i, j, v);
        trip.emplace_back(j, i, v);
      };
      for (int col = 0; col < d.a.outerSize(); ++col) {
        for (SpMat::InnerIterator it(d.a, col); it; ++it) add(n + it.row(), it.col(), it.value());
      }
      for (int col = 0; col < gl_.outerSize(); ++col) {
        for (SpMat::InnerIterator it(gl_, col); it; ++it) {
          add(n + d.p + it.row(), it.col(), it.value());
        }
      }
      for (size_t c = 0; c < d.psd.size(); ++c) {
        const PsdCone& pc = d.psd[c];
        for (size_t j = 0; j < pc.cols.size(); ++j) {
          for (int i = 0; i < pc.size; ++i) {
            const double v = gs_[c](i, static_cast<Eigen::Index>(j));
            if (v != 0.0) add(n + d.p + pc.offset + i, pc.cols[j], v);
          }
        }
      }
      const double reg = 1e-13;
      for (int i = 0; i < n; ++i) trip.emplace_back(i, i, reg);
      for (int i = n; i < n + d.p; ++i) trip.emplace_back(i, i, -reg);
      for (int i = n + d.p; i < m; ++i) trip.emplace_back(i, i, -1.0);
      SpMat k(m, m);
      k.setFromTriplets(trip.begin(), trip.end());
      k.makeCompressed();
      slu_.analyzePattern(k);
      slu_.factorize(k);
      if (slu_.info() == Eigen::Success) return;
      augmented_ = false;
    }
    MatrixXd h = MatrixXd::Zero(n, n);
    for (int r = 0; r < d.nl; ++r) {
      for (SpMat::InnerIterator i(gl_, r); i; ++i) {
        for (SpMat::InnerIterator j(gl_, r); j; ++j) h(i.col(), j.col()) += i.value() * j.value();
      }
    }
    for (size_t k = 0; k < d.psd.size(); ++k) {
      const PsdCone& pc = d.psd[k];
      const MatrixXd block = gs_[k].transpose() * gs_[k];
      for (size_t i = 0; i < pc.cols.size(); ++i) {
        for (size_t j = 0; j < pc.cols.size(); ++j) h(pc.cols[i], pc.cols[j]) += block(i, j);
      }
    }
    const int m = n + d.p;
    MatrixXd kr = MatrixXd::Zero(m, m);
    kr.topLeftCorner(n, n) = h;
    kr.topRightCorner(n, d.p) = a.transpose();
    kr.bottomLeftCorner(d.p, n) = a;
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i)));
    const double reg = 1e-14 * scale;
    for (int i = 0; i < n; ++i) kr(i, i) += reg;
    for (int i = n; i < m; ++i) kr(i, i) -= reg;
    lu_.compute(kr);
  }

  // Solves [0 A' G'; A 0 0; G 0 -W'W] [dx; dy; dz] = [r1; r2; r3].
  // `u` receives W dz.
  bool Solve(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& dx,
             VectorXd& dy, VectorXd& dz, VectorXd* u_out = nullptr) const {
    const VectorXd r3s = ApplyWinvT(d_, w_, r3);
    dx = VectorXd::Zero(d_.n);
    dy = VectorXd::Zero(d_.p);
    VectorXd u = VectorXd::Zero(d_.total);
    VectorXd e1 = r1, e2 = r2, e3 = r3s;
    const double bound = 1e-15 * (1.0 + r1.norm() + r2.norm() + r3.norm());
    // Refinement residuals are measured in unscaled coordinates; W may be
    // badly conditioned near the boundary.
    for (int it = 0; it < 6; ++it) {
      if (augmented_) {
        VectorXd rhs(d_.n + d_.p + d_.total);
        rhs << e1, e2, e3;
        const VectorXd sol = slu_.solve(rhs);
        if (!sol.allFinite()) return false;
        dx += sol.head(d_.n);
        dy += sol.segment(d_.n, d_.p);
        u += sol.tail(d_.total);
      } else {
        VectorXd rhs(d_.n + d_.p);
        rhs.head(d_.n) = e1 + GsT(e3);
        rhs.tail(d_.p) = e2;
        const VectorXd sol = lu_.solve(rhs);
        if (!sol.allFinite()) return false;
        dx += sol.head(d_.n);
        dy += sol.tail(d_.p);
        u += Gs(sol.head(d_.n)) - e3;
      }
      e1 = r1 - d_.a.transpose() * dy - GsT(u);
      e2 = r2 - d_.a * dx;
      const VectorXd e3u = r3 - GMul(d_, dx) + ApplyWt(d_, w_, u);
      if (e1.norm() + e2.norm() + e3u.norm() <= bound) break;
      e3 = ApplyWinvT(d_, w_, e3u);
    }
    dz = ApplyWinv(d_, w_, u);
    if (u_out != nullptr) *u_out = u;
    return dz.allFinite();
  }

 private:
  VectorXd Gs(const VectorXd& x) const {
    VectorXd out(d_.total);
    out.head(d_.nl) = gl_ * x;
    for (size_t k = 0; k < d_.psd.size(); ++k) {
      const PsdCone& pc = d_.psd[k];
      VectorXd xs(pc.cols.size());
      for (size_t j = 0; j < pc.cols.size(); ++j) xs(j) = x(pc.cols[j]);
      out.segment(pc.offset, pc.size) = gs_[k] * xs;
    }
    return out;
  }
  VectorXd GsT(const VectorXd& u) const {
    VectorXd out = gl_.transpose() * u.head(d_.nl);
    for (size_t k = 0; k < d_.psd.size(); ++k) {
      const PsdCone& pc = d_.psd[k];
      const VectorXd part = gs_[k].transpose() * u.segment(pc.offset, pc.size);
      for (size_t j = 0; j < pc.cols.size(); ++j) out(pc.cols[j]) += part(j);
    }
    return out;
  }

  const Data& d_;
  const Scaling& w_;
  SpMat gl_;
  std::vector<MatrixXd> gs_;
  bool augmented_ = false;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> slu_;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

double Norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.norm(); }

}  // namespace

ConicSolution Solve(const ConicProblem& problem, double tol) {
  SolverOptions options;
  options.tol = tol;
  return Solve(problem, options);
}

ConicSolution Solve(const ConicProblem& problem, const SolverOptions& options) {
  const double tol = options.tol;
  if (!(tol > 0.0 && tol <= 1e-2)) throw InputError("solver tolerance must lie in (0, 1e-2]");
  if (options.max_iter < 1) throw InputError("solver iteration limit must be positive");

  // POLYCE_SOLVER_VERBOSE=1 turns on the iteration log without recompiling.
  const bool verbose = options.verbose || std::getenv("POLYCE_SOLVER_VERBOSE") != nullptr;
  ConicSolution sol;
  sol.x.assign(problem.num_atoms(), 0.0);
  sol.equality_duals.assign(problem.num_equalities(), 0.0);
  for (const ConeRows& cone : problem.cones()) {
    sol.cone_duals.push_back(MatrixXd::Zero(cone.dim, cone.dim));
  }

  Data d;
  if (!Prepare(problem, tol, d)) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  const VectorXd h = Hvec(d);
  const VectorXd e = Identity(d);

  VectorXd x, y, z, s, tmp;
  {
    const Scaling w0 = IdentityScaling(d);
    const Kkt k0(d, w0);
    VectorXd dz;
    if (!k0.Solve(VectorXd::Zero(d.n), d.b, h, x, tmp, dz)) return sol;
    s = -dz;
    if (!k0.Solve(-d.c, VectorXd::Zero(d.p), VectorXd::Zero(d.total), tmp, y, z)) {
      return sol;
    }
  }
  if (d.total > 0) {
    const double as = MinEig(d, s);
    if (as < 1e-8 * std::max(1.0, Norm(s))) s += (1.0 - std::min(as, 0.0)) * e;
    const double az = MinEig(d, z);
    if (az < 1e-8 * std::max(1.0, Norm(z))) z += (1.0 - std::min(az, 0.0)) * e;
  }
  double tau = 1.0, kappa = 1.0;
  if (verbose) {
    std::fprintf(stderr, "conic: %d vars, %d equalities, %d nonneg, %zu psd, kkt %s\n", d.n, d.p,
                 d.nl, d.psd.size(), UseAugmented(d) ? "augmented" : "reduced");
  }

  const double resx0 = std::max(1.0, Norm(d.c));
  const double resy0 = std::max(1.0, Norm(d.b));
  const double resz0 = std::max(1.0, Norm(h));

  auto finish = [&](Status status, double scale) {
    sol.status = status;
    for (int i = 0; i < d.n; ++i) sol.x[i] = x(i) / scale;
    for (int r = 0; r < d.p; ++r) sol.equality_duals[d.eq_rows[r]] = y(r) / scale;
    for (int r = 0; r < d.nl; ++r) sol.cone_duals[d.nonneg_ids[r]](0, 0) = z(r) / scale;
    for (const PsdCone& pc : d.psd) {
      sol.cone_duals[pc.cone_id] = Smat(z.segment(pc.offset, pc.size), pc.dim) / scale;
    }
    sol.objective_value = d.c.dot(x) / scale + d.c0;
    sol.dual_objective = -(d.b.dot(y) + h.dot(z)) / scale + d.c0;
    double eq = 0.0;
    for (const auto& [lhs, rhs] : problem.equalities()) {
      eq = std::max(eq, std::abs(lhs.Evaluate(sol.x) - rhs));
    }
    sol.equality_residual = eq;
    if (d.total > 0) sol.min_cone_eigenvalue = MinEig(d, s) / scale;
    return sol;
  };

  // Best iterate so far by max(pres, dres, gap measure). Degenerate problems
  // can lose accuracy before reaching tol; an iterate within 10 tol is then
  // accepted as optimal.
  struct Iterate {
    VectorXd x, y, z, s;
    double tau, kappa;
  };
  std::optional<Iterate> best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  double best_cert = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    sol.iterations = iter;
    const VectorXd gx = GMul(d, x);
    const VectorXd aty = d.a.transpose() * y;
    const VectorXd gtz = GtMul(d, z);
    const VectorXd ax = d.a * x;
    const VectorXd rx = aty + gtz + d.c * tau;
    const VectorXd ry = ax - d.b * tau;
    const VectorXd rz = gx + s - h * tau;
    const double cx = d.c.dot(x), by = d.b.dot(y), hz = h.dot(z);
    const double rt = kappa + cx + by + hz;
    const double gap = s.dot(z);
    const double mu = (gap + tau * kappa) / (d.nu + 1.0);

    const double pcost = cx / tau, dcost = -(by + hz) / tau;
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0.0) relgap = gap / tau / tau / -pcost;
    if (dcost > 0.0) relgap = gap / tau / tau / dcost;
    const double pres = std::max(Norm(ry) / resy0, Norm(rz) / resz0) / tau;
    const double dres = Norm(rx) / resx0 / tau;
    const double pinf = (hz + by < 0.0) ? Norm(aty + gtz) / resx0 / -(hz + by)
                                        : std::numeric_limits<double>::infinity();
    const double dinf = (cx < 0.0) ? std::max(Norm(ax) / resy0, Norm(gx + s) / resz0) / -cx
                                   : std::numeric_limits<double>::infinity();
    if (verbose) {
      std::fprintf(stderr, "%3d pcost % .8e dcost % .8e gap %.2e pres %.2e dres %.2e k/t %.2e\n",
                   iter, pcost + d.c0, dcost + d.c0, gap / tau / tau, pres, dres, kappa / tau);
    }
    if (pres <= tol && dres <= tol && (gap / tau / tau <= tol || relgap <= tol)) {
      return finish(Status::kOptimal, tau);
    }
    if (pinf <= tol) {
      const double scale = -(hz + by);
      tau = 1.0;
      finish(Status::kInfeasible, 1.0);
      for (double& v : sol.equality_duals) v *= 1.0 / scale;
      for (auto& m : sol.cone_duals) m /= scale;
      return sol;
    }
    if (dinf <= tol) return finish(Status::kUnbounded, -cx);
    const double merit = std::max({pres, dres, std::min(gap / tau / tau, relgap)});
    // A converging infeasibility certificate also counts as progress.
    const double cert = std::min(pinf, dinf);
    const bool cert_progress = cert < 0.5 * best_cert;
    best_cert = std::min(best_cert, cert);
    if (merit < best_merit) {
      best_merit = merit;
      best = Iterate{x, y, z, s, tau, kappa};
      since_best = 0;
    } else if (cert_progress) {
      since_best = 0;
    } else if (++since_best >= 8) {
      break;
    }
    if (iter == options.max_iter) break;

    Scaling w;
    if (!ComputeScaling(d, s, z, w)) break;
    const Kkt kkt(d, w);

    VectorXd dx2, dy2, dz2, u2;
    if (!kkt.Solve(-d.c, d.b, h, dx2, dy2, dz2, &u2)) break;

    Scaled lam;
    lam.l = w.lambda_l;
    for (const PsdScaling& ps : w.psd) lam.m.push_back(ps.lambda.asDiagonal());

    // Newton direction for complementarity target rc, rtk. ds and dz are
    // also returned in scaled coordinates (sds = W^{-T} ds, sdz = W dz).
    struct Dir {
      VectorXd dx, dy, dz, ds, sds, sdz;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double eta, const Scaled& rc, double rtk, Dir& dir) {
      const VectorXd ldiv = LambdaDiv(d, w, rc);
      if (!kkt.Solve(-eta * rx, -eta * ry, -eta * rz - ApplyWt(d, w, ldiv), dir.dx, dir.dy,
                     dir.dz, &dir.sdz)) {
        return false;
      }
      const double num =
          -eta * rt - rtk / tau - d.c.dot(dir.dx) - d.b.dot(dir.dy) - h.dot(dir.dz);
      const double den = d.c.dot(dx2) + d.b.dot(dy2) + h.dot(dz2) - kappa / tau;
      dir.dtau = num / den;
      dir.dx += dir.dtau * dx2;
      dir.dy += dir.dtau * dy2;
      dir.dz += dir.dtau * dz2;
      dir.sdz += dir.dtau * u2;
      dir.dkappa = (rtk - kappa * dir.dtau) / tau;
      dir.sds = ldiv - dir.sdz;
      dir.ds = ApplyWt(d, w, dir.sds);
      return std::isfinite(dir.dtau) && dir.ds.allFinite();
    };
    auto step_to_boundary = [&](const Dir& dir) {
      double a = std::min(MaxStep(d, w, ToScaled(d, dir.sds)), MaxStep(d, w, ToScaled(d, dir.sdz)));
      if (dir.dtau < 0.0) a = std::min(a, -tau / dir.dtau);
      if (dir.dkappa < 0.0) a = std::min(a, -kappa / dir.dkappa);
      return a;
    };

    // Affine scaling predictor.
    Scaled rc;
    rc.l = -lam.l.cwiseProduct(lam.l);
    for (const MatrixXd& m : lam.m) rc.m.push_back(-m * m);
    Dir aff;
    if (!direction(1.0, rc, -tau * kappa, aff)) break;
    const double aa = std::min(1.0, step_to_boundary(aff));
    const double sigma = std::pow(1.0 - aa, 3);

    // Combined corrector.
    const Scaled sa = ToScaled(d, aff.sds);
    const Scaled za = ToScaled(d, aff.sdz);
    rc.l -= sa.l.cwiseProduct(za.l);
    rc.l.array() += sigma * mu;
    for (size_t k = 0; k < rc.m.size(); ++k) {
      rc.m[k] -= 0.5 * (sa.m[k] * za.m[k] + za.m[k] * sa.m[k]);
      rc.m[k].diagonal().array() += sigma * mu;
    }
    Dir dir;
    if (!direction(1.0 - sigma, rc, -tau * kappa - aff.dtau * aff.dkappa + sigma * mu, dir)) {
      break;
    }
    const double alpha = std::min(1.0, kStepFraction * step_to_boundary(dir));
    x += alpha * dir.dx;
    y += alpha * dir.dy;
    z += alpha * dir.dz;
    s += alpha * dir.ds;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
    if (!(tau > 0.0 && kappa > 0.0)) break;
  }
  if (best) {
    x = best->x;
    y = best->y;
    z = best->z;
    s = best->s;
    tau = best->tau;
    kappa = best->kappa;
    if (best_merit <= 10.0 * tol) return finish(Status::kOptimal, tau);
  }
  return finish(Status::kNumericalFailure, tau > 0.0 ? tau : 1.0);
}

}  // namespace polyce::conic
