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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "polyce/adaptive.h"
#include "polyce/conic.h"
#include "polyce/finite_ce.h"
#include "polyce/game.h"
#include "polyce/game_io.h"
#include "polyce/moment_relaxation.h"
#include "polyce/random_game.h"
#include "polyce/sos.h"

namespace polyce {
namespace {

using Grids = std::vector<std::vector<double>>;

PolynomialGame QuadraticGame() { return LoadGameFile(oracle::DataPath("quadratic.json")); }
PolynomialGame Embedded() { return LoadGameFile(oracle::DataPath("embedded.json")); }

// Collects failure reasons for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string Summary() const {
    std::ostringstream s;
    for (const std::string& f : failures_) s << "; " << f;
    if (count_ > static_cast<int>(failures_.size())) s << "; ...";
    return s.str();
  }

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool GridsNear(const Grids& a, const Grids& b, double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (size_t j = 0; j < a[i].size(); ++j) {
      if (!Near(a[i][j], b[i][j], tol)) return false;
    }
  }
  return true;
}

void EmbeddedTrace(Check& c, std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  const IterationTrace tr = RunAdaptive(Embedded(), {{-1.0}, {-1.0}}, {});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  note = "time " + Fmt(secs) + "s";
  c.Expect(secs < 30.0, "runtime " + Fmt(secs));
  c.Expect(tr.iterations.size() == 3, "iterations " + std::to_string(tr.iterations.size()));
  if (tr.iterations.size() != 3) return;
  const double eps[3] = {2.0, 4.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    c.Expect(Near(tr.iterations[k].epsilon, eps[k], 1e-4),
             "eps" + std::to_string(k) + " " + Fmt(tr.iterations[k].epsilon));
  }
  c.Expect(GridsNear(tr.iterations[1].new_points, {{0.0}, {0.0}}, 1e-4), "first added point");
  c.Expect(GridsNear(tr.iterations[2].new_points, {{1.0}, {1.0}}, 1e-4), "second added point");
  struct Atom {
    double x, y, p;
  };
  const Atom expected[3] = {{0, 1, 0.4922}, {1, 0, 0.4922}, {1, 1, 0.0156}};
  const auto support = tr.last().dist.Support(1e-6);
  c.Expect(support.size() == 3, "support size " + std::to_string(support.size()));
  for (const Atom& e : expected) {
    double p = 0.0;
    for (const auto& a : support) {
      if (Near(a.point[0], e.x, 1e-4) && Near(a.point[1], e.y, 1e-4)) p += a.prob;
    }
    c.Expect(Near(p, e.p, 5e-3), "pi(" + Fmt(e.x) + "," + Fmt(e.y) + ") = " + Fmt(p));
  }
}

void Quadratic(Check& c, std::string& note) {
  const IterationTrace tr = RunAdaptive(QuadraticGame(), {{0.0}, {0.0}}, {});
  note = "iterations " + std::to_string(tr.iterations.size()) + ", eps " +
         Fmt(tr.last().epsilon);
  c.Expect(tr.iterations.size() == 3, "iterations " + std::to_string(tr.iterations.size()));
  c.Expect(tr.last().epsilon <= 1e-5, "final eps " + Fmt(tr.last().epsilon));
  c.Expect(tr.last().audited_epsilon <= 1e-5, "audited eps " + Fmt(tr.last().audited_epsilon));
  c.Expect(GridsNear(tr.last().grids, {{0.0, 1.0}, {0.0, 1.0}}, 1e-4), "final grids");
}

FiniteGame CoordinationGame() {
  const ProductGrid grid({{-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}});
  const double u[3][3] = {{0, 1, 0}, {1, 5, 7}, {0, 7, 0}};
  std::vector<double> pay(grid.num_cells());
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = 0; b < 3; ++b) {
      const std::vector<size_t> idx{a, b};
      pay[grid.Flatten(idx)] = u[a][b];
    }
  }
  return FiniteGame(grid, {pay, pay});
}

void NonConvergence(Check& c, std::string& note) {
  AdaptiveConfig cfg;
  cfg.alpha = cfg.beta = 1.0;
  cfg.degenerate = true;
  cfg.max_iter = 5;
  const IterationTrace fin = RunAdaptiveFinite(CoordinationGame(), {{-1.0}, {-1.0}}, cfg);
  c.Expect(fin.iterations.size() == 5, "finite iterations " + std::to_string(fin.iterations.size()));
  for (const IterationRecord& r : fin.iterations) {
    c.Expect(Near(r.epsilon, 1.0, 1e-6), "finite eps " + Fmt(r.epsilon));
    if (r.k >= 1) c.Expect(GridsNear(r.grids, {{-1.0, 0.0}, {-1.0, 0.0}}, 1e-6), "finite grids");
  }
  const IterationTrace emb = RunAdaptive(Embedded(), {{-1.0}, {-1.0}}, cfg);
  c.Expect(emb.iterations.size() == 5, "embedded iterations " + std::to_string(emb.iterations.size()));
  for (const IterationRecord& r : emb.iterations) {
    c.Expect(Near(r.epsilon, 2.0, 1e-6), "embedded eps " + Fmt(r.epsilon));
    if (r.k >= 1) c.Expect(GridsNear(r.grids, {{-1.0, 0.0}, {-1.0, 0.0}}, 1e-6), "embedded grids");
  }
  note = std::string("finite ") + AdaptiveStatusName(fin.status) + ", embedded " +
         AdaptiveStatusName(emb.status);
}

void StaticRate(Check& c, std::string& note) {
  const PolynomialGame g = QuadraticGame();
  double base = 0.0;
  for (int d : {5, 10, 20, 40}) {
    const StaticResult r = StaticDiscretization(g, d);
    const double product = r.report.epsilon * d;
    if (d == 5) base = product;
    note += "d=" + std::to_string(d) + ":" + Fmt(product) + " ";
    c.Expect(product <= 3 * base && product >= base / 3, "product at d=" + std::to_string(d));
    const double oracle = oracle::OracleEpsilon(g, r.dist);
    c.Expect(Near(oracle, r.report.epsilon, 1e-5),
             "oracle " + Fmt(oracle) + " vs " + Fmt(r.report.epsilon) + " at d=" + std::to_string(d));
  }
}

void MomentSingleton(Check& c, std::string& note) {
  const PolynomialGame g = QuadraticGame();
  std::vector<PayoffBox> boxes;
  for (int d = 0; d <= 2; ++d) boxes.push_back(PayoffBounds(g, MakeOrder(g, d)));
  const double target[2] = {2.988, -1.510};
  for (int i = 0; i < 2; ++i) {
    const double spread = boxes[2].hi[i] - boxes[2].lo[i];
    c.Expect(spread <= 1e-3, "spread " + Fmt(spread));
    c.Expect(Near(boxes[2].lo[i], target[i], 1e-3) && Near(boxes[2].hi[i], target[i], 1e-3),
             "point " + Fmt(boxes[2].lo[i]));
    for (int d = 1; d <= 2; ++d) {
      c.Expect(boxes[d].lo[i] >= boxes[d - 1].lo[i] - 1e-5, "lower nesting");
      c.Expect(boxes[d].hi[i] <= boxes[d - 1].hi[i] + 1e-5, "upper nesting");
    }
  }
  note = "d=2 box [" + Fmt(boxes[2].lo[0]) + "," + Fmt(boxes[2].hi[0]) + "] x [" +
         Fmt(boxes[2].lo[1]) + "," + Fmt(boxes[2].hi[1]) + "]";
}

std::vector<double> Mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> Add(std::vector<double> a, const std::vector<double>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t k = 0; k < b.size(); ++k) a[k] += b[k];
  return a;
}

std::vector<double> RandomSos(std::mt19937_64& rng, int half, int terms) {
  std::normal_distribution<double> nd;
  std::vector<double> out{0.0};
  for (int k = 0; k < terms; ++k) {
    std::vector<double> q(half + 1);
    for (double& x : q) x = nd(rng);
    out = Add(out, Mul(q, q));
  }
  return out;
}

conic::Status IntervalSolve(const std::vector<double>& p, sos::SosCertificate* cert) {
  conic::ConicProblem prob;
  const std::vector<conic::LinExpr> coeffs(p.begin(), p.end());
  const sos::IntervalBlocks blocks =
      sos::IntervalNonnegConstraint(prob, coeffs, static_cast<int>(p.size()) - 1);
  const conic::ConicSolution sol = conic::Solve(prob, 1e-9);
  if (sol.status == conic::Status::kOptimal && cert != nullptr) {
    *cert = sos::ExtractCertificate(sol, blocks);
  }
  return sol.status;
}

void SosLayer(Check& c, std::string& note) {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> deg(0, 6);
  int certified = 0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = deg(rng);
    std::vector<double> p = RandomSos(rng, d / 2, 2);
    if (d >= 2) p = Add(p, Mul({1.0, 0.0, -1.0}, RandomSos(rng, (d - 2) / 2, 2)));
    sos::SosCertificate cert;
    if (IntervalSolve(p, &cert) != conic::Status::kOptimal) {
      c.Expect(false, "not certified, trial " + std::to_string(trial));
      continue;
    }
    const sos::CertificateCheck check = sos::VerifyCertificate(cert, p);
    worst_residual = std::max(worst_residual, check.residual);
    c.Expect(check.valid && check.residual <= 1e-7,
             "certificate residual " + Fmt(check.residual) + ", trial " + std::to_string(trial));
    ++certified;
  }
  std::normal_distribution<double> nd;
  int refuted = 0, tried = 0;
  while (tried < 200) {
    std::vector<double> p(1 + rng() % 7);
    for (double& x : p) x = nd(rng);
    double lo = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      lo = std::min(lo, oracle::PowEvalUnivariate(p, -1.0 + 2.0 * k / 1000.0));
    }
    if (lo > -1e-2) continue;
    ++tried;
    const bool ok = IntervalSolve(p, nullptr) == conic::Status::kInfeasible;
    c.Expect(ok, "not refuted, min " + Fmt(lo));
    refuted += ok;
  }
  note = "certified " + std::to_string(certified) + "/200, refuted " + std::to_string(refuted) +
         "/200, max residual " + Fmt(worst_residual);
}

void CrossMethod(Check& c, std::string& note) {
  AdaptiveConfig cfg;
  // Payoffs of an eps-CE sit O(sqrt(eps)) from the CE set, so the run is
  // driven well below the payoff tolerance.
  cfg.eps_stop = 1e-9;
  double worst_outside = 0.0;
  int members = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PolynomialGame g = RandomGame(2, 4, seed);
    const IterationTrace tr = RunAdaptive(g, {{0.0}, {0.0}}, cfg);
    const SupportedDistribution& dist = tr.last().dist;
    const RelaxationOrder order = MakeOrder(g, 1);
    const MembershipResult m =
        CheckMomentMembership(g, order, sos::MomentsOf(dist, 2 * order.r), 1e-4);
    c.Expect(m.member, "seed " + std::to_string(seed) + " not a member");
    members += m.member;
    const PayoffBox box = PayoffBounds(g, order);
    const std::vector<double> u = ExpectedUtilities(g, dist);
    for (int i = 0; i < 2; ++i) {
      const double outside = std::max(box.lo[i] - u[i], u[i] - box.hi[i]);
      worst_outside = std::max(worst_outside, outside);
      c.Expect(outside <= 1e-4, "seed " + std::to_string(seed) + " payoff outside by " + Fmt(outside));
    }
  }
  note = "members " + std::to_string(members) + "/10, worst box excess " + Fmt(worst_outside);
}

void FiniteOracle(Check& c, std::string& note) {
  double worst = -1.0;
  const ProductGrid grid({{-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}});
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pay(0, 7);
    std::vector<std::vector<double>> payoffs(2, std::vector<double>(9));
    for (auto& p : payoffs) {
      for (double& v : p) v = pay(rng);
    }
    const FiniteGame game(grid, payoffs);
    const SupportedDistribution dist = CeLp(game);
    double total = 0.0;
    for (double p : dist.probs()) {
      c.Expect(p >= -1e-12, "negative probability, seed " + std::to_string(seed));
      total += p;
    }
    c.Expect(Near(total, 1.0, 1e-9), "mass " + Fmt(total));
    const double v = oracle::DepartureViolation(game, dist.probs());
    worst = std::max(worst, v);
    c.Expect(v <= 1e-7, "violation " + Fmt(v) + ", seed " + std::to_string(seed));
  }
  note = "worst departure gain " + Fmt(worst);
}

int Run() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&, std::string&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "embedded game adaptive trace", EmbeddedTrace},
      {2, "quadratic game adaptive convergence", Quadratic},
      {3, "degenerate non-convergence", NonConvergence},
      {4, "static discretization rate", StaticRate},
      {5, "moment relaxation singleton", MomentSingleton},
      {6, "interval SOS certificates", SosLayer},
      {7, "adaptive vs moment relaxation", CrossMethod},
      {8, "finite CE vs departure enumeration", FiniteOracle},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check c;
    std::string note;
    try {
      cr.fn(c, note);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s (%s)%s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.name, note.c_str(),
                c.Summary().c_str());
    std::fflush(stdout);
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace polyce

int main() { return polyce::Run(); }
