// Copyright 2026 The fwscale Authors
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

#include "fwscale/fw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fwscale/errors.hpp"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fws {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Euclidean projection onto {||x||_1 <= r} by the sort-based rule.
Vector project_l1(const Vector& y, double r) {
  if (y.lpNorm<1>() <= r) return y;
  std::vector<double> u(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) u[i] = std::abs(y(i));
  std::sort(u.rbegin(), u.rend());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - r) / static_cast<double>(j + 1);
    if (u[j] > t) theta = t;
  }
  Vector x(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    x(i) = std::copysign(std::max(std::abs(y(i)) - theta, 0.0), y(i));
  return x;
}

// min over the l1 ball by projected gradient with step 1/L.
double l1_minimum(const QuadraticObjective& f, double r, int iters) {
  Vector x = Vector::Zero(f.shape().rows);
  const double step = 1.0 / f.smoothness();
  for (int k = 0; k < iters; ++k)
    x = project_l1(x - step * f.full_grad(x).coeffs(), r);
  return f.value(x);
}

QuadraticObjective random_quadratic(std::size_t n, Rng& rng) {
  const DenseMatrix b = gaussian_matrix(n, n, rng);
  return QuadraticObjective(b.transpose() * b / static_cast<double>(n),
                            2.0 * gaussian_vector(n, rng));
}

TEST(StepRuleTest, OpenLoop) {
  const StepRule rule;
  EXPECT_EQ(rule.at(0), 1.0);
  EXPECT_DOUBLE_EQ(rule.at(1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rule.at(98), 0.02);
}

TEST(ToleranceRuleTest, DecayingScheduleIsExact) {
  const auto rule = ToleranceRule::theorem1(3.0, 2.0, 0.25);
  for (double gamma : {1.0, 0.5, 0.01}) EXPECT_EQ(rule.eps(gamma), 1.5 * gamma);
  EXPECT_EQ(ToleranceRule::exact().eps(0.3), 0.0);
  EXPECT_TRUE(std::isnan(ToleranceRule::constant_xi(1e-3).eps(0.3)));
}

TEST(DualityGapTest, ZeroWhenAtomIsThePoint) {
  const Gradient g = Gradient::dense({3, 1}, Eigen::Vector3d(1, -2, 3));
  OracleAnswer a;
  a.atom = BasisAtom{1, 0.5};
  a.inner = atom_inner(g, a.atom);
  Vector x = Vector::Zero(3);
  x(1) = 0.5;
  EXPECT_EQ(duality_gap(x, g, a), 0.0);
}

TEST(DualityGapTest, HandArithmetic) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(3));
  const Vector e1 = Vector::Unit(3, 0);
  const Gradient g = f.full_grad(e1);
  EXPECT_DOUBLE_EQ(duality_gap(e1, g, lmo_l1(g.coeffs(), 1.0)), 2.0);
}

TEST(DualityGapTest, BoundsSuboptimality) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_quadratic(4, rng);
    const double fstar = l1_minimum(f, 1.0, 20000);
    for (int p = 0; p < 10; ++p) {
      Vector x = gaussian_vector(4, rng);
      x = project_l1(x, 1.0);
      const Gradient g = f.full_grad(x);
      const double gap = duality_gap(x, g, lmo_l1(g.coeffs(), 1.0));
      EXPECT_GE(gap, f.value(x) - fstar - 1e-10);
    }
  }
}

FwConfig exact_config(std::size_t iters) {
  FwConfig c;
  c.gap_tol = -kInf;
  c.max_iter = iters;
  return c;
}

TEST(FrankWolfeTest, ExactRateOnL1Quadratic) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(10));
  const Domain d = Domain::l1(10, 1.0);
  const auto r = frank_wolfe(f, d, Vector::Unit(10, 0), exact_config(1002));
  // records[j].objective is f(x_{j-1}); x_{-1} is the start.
  for (std::size_t j = 1; j < r.trace.records.size(); ++j) {
    const double k = static_cast<double>(j - 1);
    EXPECT_LE(r.trace.records[j].objective, 2.0 * 4.0 / (k + 2)) << "k=" << k;
  }
  EXPECT_LT(r.trace.final_objective, 1e-2);
}

TEST(FrankWolfeTest, DecayingRuleWithAdversarialOracle) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(10));
  const Domain d = Domain::l1(10, 1.0);
  FwConfig c = exact_config(502);
  c.tolerance = ToleranceRule::theorem1(1.0, 2.0, 0.1);
  // Shrinks the exact vertex toward the origin so <g, v> rises by exactly eps.
  const Oracle adversary = [](const Domain& dom, const Gradient& g,
                              const OracleRequest& req) {
    OracleAnswer exact = lmo_l1(g.coeffs(), dom.radius);
    const double gmax = g.coeffs().lpNorm<Eigen::Infinity>();
    if (gmax == 0.0) return exact;
    const double theta = std::min(1.0, req.eps / (2.0 * dom.radius * gmax));
    const Vector v = (1.0 - 2.0 * theta) * atom_to_point(exact.atom, dom.shape);
    OracleAnswer a;
    a.atom = PointAtom{v};
    a.inner = g.dot(v);
    return a;
  };
  double worst = 0.0;
  const FwObserver check = [&](const FwIterationView& view) {
    const double exact_min = exact_linear_minimum(d, view.gradient, 0);
    EXPECT_LE(view.answer.inner - exact_min, view.request.eps * (1 + 1e-12));
    if (view.k >= 1) {
      const double k = static_cast<double>(view.k - 1);
      const double ratio =
          view.record.objective / (2.0 * 4.0 * 1.1 / (k + 2));
      worst = std::max(worst, ratio);
    }
  };
  frank_wolfe(f, d, Vector::Unit(10, 0), c, adversary, check);
  EXPECT_LE(worst, 1.0);
}

TEST(FrankWolfeTest, IteratesStayFeasibleAndTraceIsWellFormed) {
  Rng rng(8);
  const auto f = random_quadratic(6, rng);
  const Domain d = Domain::l1(6, 0.7);
  const FwObserver feasible = [&](const FwIterationView& v) {
    EXPECT_LE(d.gauge(v.x_prev), 0.7 * (1 + 1e-10));
  };
  const auto r = frank_wolfe(f, d, Vector::Zero(6), exact_config(300), {},
                             feasible);
  EXPECT_LE(r.trace.records.size(), 301u);
  EXPECT_TRUE(d.contains(r.x));
  for (std::size_t j = 1; j < r.trace.records.size(); ++j) {
    EXPECT_GE(r.trace.records[j].wall_s, r.trace.records[j - 1].wall_s);
    EXPECT_EQ(r.trace.records[j].k, j);
  }
  EXPECT_EQ(r.trace.termination, Termination::kMaxIter);
}

TEST(FrankWolfeTest, GapCertificate) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_quadratic(5, rng);
    const double fstar = l1_minimum(f, 1.0, 50000);
    FwConfig c = exact_config(100000);
    c.gap_tol = 1e-3;
    const auto r = frank_wolfe(f, Domain::l1(5, 1.0), Vector::Zero(5), c);
    ASSERT_EQ(r.trace.termination, Termination::kGapMet);
    EXPECT_LE(r.trace.records.back().gap, 1e-3);
    // The stopping test fires before the update, at x_{k-1} = final x.
    EXPECT_LE(r.trace.final_objective - fstar, 1e-3);
  }
}

TEST(FrankWolfeTest, RejectsInfeasibleStart) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(3));
  EXPECT_THROW(frank_wolfe(f, Domain::l1(3, 1.0), Vector::Constant(3, 1.0),
                           exact_config(5)),
               InputError);
}

TEST(FrankWolfeTest, OracleFailureKeepsPartialTrace) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(3));
  int calls = 0;
  const Oracle flaky = [&](const Domain& d, const Gradient& g,
                           const OracleRequest& req) {
    if (++calls == 4) throw ConvergenceError("no luck", 1.0);
    return solve_lmo(d, g, req);
  };
  try {
    frank_wolfe(f, Domain::l1(3, 1.0), Vector::Unit(3, 0), exact_config(10),
                flaky);
    FAIL() << "expected FwFailure";
  } catch (const FwFailure& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConvergence);
    EXPECT_EQ(e.partial_trace().records.size(), 3u);
  }
}

TEST(FrankWolfeTest, TimeBudgetStopsTheRun) {
  const auto f = QuadraticObjective::squared_distance(Vector::Zero(50));
  FwConfig c = exact_config(std::numeric_limits<std::size_t>::max());
  c.time_budget_s = 0.05;
  const auto r = frank_wolfe(f, Domain::l1(50, 1.0), Vector::Unit(50, 0), c);
  EXPECT_EQ(r.trace.termination, Termination::kTimeBudget);
}

TEST(FrankWolfeTest, MatrixRankGrowsAtMostByOnePerStep) {
  const auto inst = make_symmetric_completion(12, 3, 0.1, 0.8, 2);
  const CompletionObjective obj(inst, Scaling::kPaperTotal);
  const Domain d = Domain::psd_nuclear(12, nuclear_norm(inst.truth()));
  for (std::size_t k : {1, 2, 4, 7}) {
    const auto r = frank_wolfe(obj, d, Vector::Zero(144), exact_config(k));
    const DenseMatrix x = unflatten(r.x, 12, 12);
    const auto sv = Eigen::JacobiSVD<DenseMatrix>(x).singularValues();
    const auto rank = (sv.array() > 1e-10 * std::max(sv(0), 1e-300)).count();
    EXPECT_LE(static_cast<std::size_t>(rank), k);
  }
}

// Five-by-five completion: the gap-stopped answer is within eps of a long
// reference run's lower bound max_k (f(x_k) - gap_k).
TEST(FrankWolfeTest, SmallCompletionMatchesReference) {
  const auto inst = make_symmetric_completion(5, 2, 0.1, 0.8, 3);
  const CompletionObjective obj(inst, Scaling::kPaperTotal);
  const Domain d = Domain::psd_nuclear(5, nuclear_norm(inst.truth()));

  double lower = -kInf;
  const FwObserver track = [&](const FwIterationView& v) {
    lower = std::max(lower, v.record.objective - v.record.gap);
  };
  FwConfig ref = exact_config(100000);
  frank_wolfe(obj, d, Vector::Zero(25), ref, {}, track);

  FwConfig c = exact_config(100000);
  c.gap_tol = 1e-3;
  const auto r = frank_wolfe(obj, d, Vector::Zero(25), c);
  ASSERT_EQ(r.trace.termination, Termination::kGapMet);
  EXPECT_LE(r.trace.records.back().gap, 1e-3);
  EXPECT_LE(r.trace.final_objective, lower + 1e-3);
}

TEST(FrankWolfeTest, SameSeedSameTrajectory) {
  const auto inst = make_rectangular_completion(8, 6, 2, 0.1, 0.7, 5);
  const CompletionObjective obj(inst, Scaling::kPaperTotal);
  const Domain d = Domain::nuclear(8, 6, 5.0);
  FwConfig c = exact_config(30);
  c.tolerance = ToleranceRule::constant_xi(1e-3);
  c.seed = 42;
  const auto a = frank_wolfe(obj, d, Vector::Zero(48), c);
  const auto b = frank_wolfe(obj, d, Vector::Zero(48), c);
  EXPECT_EQ(a.x, b.x);
}

}  // namespace
}  // namespace fws
