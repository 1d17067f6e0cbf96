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

#include "fwscale/svrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fwscale/errors.hpp"
#include "fwscale/fw.hpp"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fws {
namespace {

// Lower bound on min over the l1 ball: f(x) - gap(x) at the end of a long
// projected gradient run.
double l1_lower_bound(const FiniteSumObjective& f, double alpha, int iters) {
  const std::size_t n = f.shape().rows;
  DenseMatrix h(n, n);
  const Vector zero = Vector::Zero(n);
  const Vector g0 = f.full_grad(zero).coeffs();
  for (std::size_t j = 0; j < n; ++j)
    h.col(j) = f.full_grad(Vector::Unit(n, j)).coeffs() - g0;
  const double lip =
      Eigen::SelfAdjointEigenSolver<DenseMatrix>(h).eigenvalues().maxCoeff();
  Vector x = zero;
  for (int k = 0; k < iters; ++k) {
    const Vector y = x - f.full_grad(x).coeffs() / lip;
    // Sort-based projection onto the l1 ball.
    if (y.lpNorm<1>() <= alpha) {
      x = y;
      continue;
    }
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::abs(y(i));
    std::sort(u.rbegin(), u.rend());
    double cum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      cum += u[j];
      const double t = (cum - alpha) / static_cast<double>(j + 1);
      if (u[j] > t) theta = t;
    }
    for (std::size_t i = 0; i < n; ++i)
      x(i) = std::copysign(std::max(std::abs(y(i)) - theta, 0.0), y(i));
  }
  const Gradient g = f.full_grad(x);
  return f.value(x) - duality_gap(x, g, lmo_l1(g.coeffs(), alpha));
}

TEST(DefaultSchedulesTest, FirstStep) {
  const auto s = default_schedules(1, 1, 1.5, 2.0, 0.2);
  EXPECT_EQ(s.gamma, 1.0);
  EXPECT_EQ(s.batch_size, 192u);
  EXPECT_EQ(s.epoch_length, 14u);
  EXPECT_DOUBLE_EQ(s.eps, 1.5 * 4.0 * 0.2 / 2.0);
}

TEST(DefaultSchedulesTest, HandArithmetic) {
  const auto s = default_schedules(3, 2, 1.0, 2.0, 0.5);
  EXPECT_EQ(s.gamma, 0.5);
  EXPECT_EQ(s.eps, 0.5);
  EXPECT_EQ(s.batch_size, 384u);
  EXPECT_EQ(s.epoch_length, 30u);
}

TEST(DefaultSchedulesTest, EpochLengths) {
  EXPECT_EQ(epoch_length(0), 0u);
  for (std::size_t t = 1; t <= 10; ++t)
    EXPECT_EQ(epoch_length(t), (std::size_t{1} << (t + 3)) - 2);
  EXPECT_EQ(batch_size(4, 0.5), 240u);
  EXPECT_DOUBLE_EQ(initial_eps(1.0, 2.0, 0.1), 0.2);
}

TEST(DefaultSchedulesTest, RejectsZeroIndices) {
  EXPECT_THROW(default_schedules(0, 1, 1, 1, 0), ParameterError);
  EXPECT_THROW(default_schedules(1, 0, 1, 1, 0), ParameterError);
}

TEST(SampleBatchTest, DeterministicAndInRange) {
  const auto a = sample_batch(9, 2, 5, 1000, 37);
  EXPECT_EQ(a, sample_batch(9, 2, 5, 1000, 37));
  EXPECT_NE(a, sample_batch(9, 2, 6, 1000, 37));
  EXPECT_EQ(a.size(), 1000u);
  EXPECT_LT(*std::max_element(a.begin(), a.end()), 37u);
}

class ReducedGradientTest : public ::testing::Test {
 protected:
  ReducedGradientTest() : obj_(make_least_squares_sum(50, 5, 1.0, 12)) {
    Rng rng(3);
    x_ = 0.2 * gaussian_vector(5, rng);
    x0_ = 0.2 * gaussian_vector(5, rng);
  }
  LeastSquaresSum obj_;
  Vector x_, x0_;
};

TEST_F(ReducedGradientTest, SnapshotReturnsFullGradientExactly) {
  const Gradient g0 = obj_.full_grad(x0_);
  for (const auto& batch : {std::vector<std::size_t>{3},
                            std::vector<std::size_t>{1, 1, 49, 7}}) {
    EXPECT_EQ(variance_reduced_gradient(obj_, x0_, x0_, g0, batch).coeffs(),
              g0.coeffs());
  }
}

TEST_F(ReducedGradientTest, FullBatchIsTheGradient) {
  std::vector<std::size_t> all(50);
  std::iota(all.begin(), all.end(), 0);
  const Gradient est =
      variance_reduced_gradient(obj_, x_, x0_, obj_.full_grad(x0_), all);
  EXPECT_TRUE(est.coeffs().isApprox(obj_.full_grad(x_).coeffs(), 1e-12));
}

TEST_F(ReducedGradientTest, UnbiasedMonteCarlo) {
  const Gradient g0 = obj_.full_grad(x0_);
  const Vector truth = obj_.full_grad(x_).coeffs();
  const int samples = 10000;
  Vector sum = Vector::Zero(5), sumsq = Vector::Zero(5);
  for (int s = 0; s < samples; ++s) {
    const auto batch = sample_batch(77, 1, s, 1, 50);
    const Vector e = variance_reduced_gradient(obj_, x_, x0_, g0, batch).coeffs();
    sum += e;
    sumsq += e.cwiseProduct(e);
  }
  const Vector mean = sum / samples;
  const Vector var = sumsq / samples - mean.cwiseProduct(mean);
  for (int i = 0; i < 5; ++i)
    EXPECT_LE(std::abs(mean(i) - truth(i)), 3.0 * std::sqrt(var(i) / samples))
        << "coordinate " << i;
}

TEST_F(ReducedGradientTest, RejectsBadBatches) {
  const Gradient g0 = obj_.full_grad(x0_);
  EXPECT_THROW(variance_reduced_gradient(obj_, x_, x0_, g0, {}), ParameterError);
  EXPECT_THROW(variance_reduced_gradient(obj_, x_, x0_, g0, {50}),
               ParameterError);
}

SvrfConfig l1_config(const FiniteSumObjective& f, double alpha, double delta,
                     std::size_t epochs, SvrfVariant variant,
                     std::uint64_t seed) {
  SvrfConfig c;
  c.delta = delta;
  c.smoothness = f.smoothness();
  c.diameter = 2.0 * alpha;
  c.epochs = epochs;
  c.variant = variant;
  c.seed = seed;
  return c;
}

TEST(SvrfRunTest, EpochStructure) {
  const auto f = make_least_squares_sum(60, 8, 1.0, 5);
  for (auto variant : {SvrfVariant::kRestart, SvrfVariant::kStable}) {
    SvrfConfig c = l1_config(f, 1.0, 0.1, 3, variant, 1);
    c.batch_multiplier = 0.05;
    const auto r = svrf_run(f, Domain::l1(8, 1.0), Vector::Zero(8), c);
    ASSERT_EQ(r.trace.inner_counts.size(), 3u);
    for (std::size_t t = 1; t <= 3; ++t) {
      const std::size_t expected = variant == SvrfVariant::kRestart
                                       ? epoch_length(t)
                                       : epoch_length(t) - epoch_length(t - 1);
      EXPECT_EQ(r.trace.inner_counts[t - 1], expected);
    }
    EXPECT_EQ(r.trace.epoch_objective.size(), 3u);
  }
}

TEST(SvrfRunTest, IteratesStayFeasible) {
  const auto f = make_least_squares_sum(40, 6, 2.0, 6);
  const Domain d = Domain::l1(6, 0.8);
  SvrfConfig c = l1_config(f, 0.8, 0.1, 2, SvrfVariant::kRestart, 2);
  c.batch_multiplier = 0.1;
  const SvrfObserver check = [&](const SvrfStepView& v) {
    EXPECT_LE(d.gauge(v.w), 0.8 * (1 + 1e-10));
  };
  svrf_run(f, d, Vector::Zero(6), c, {}, check);
}

// A single term makes the reduced gradient the full gradient; the first epoch
// is then plain Frank-Wolfe started at x_0.
TEST(SvrfRunTest, SingleTermReducesToFrankWolfe) {
  Rng rng(14);
  const DenseMatrix b = gaussian_matrix(7, 7, rng);
  const QuadraticObjective f(b.transpose() * b / 7.0, gaussian_vector(7, rng));
  const Domain d = Domain::l1(7, 1.0);
  SvrfConfig c = l1_config(f, 1.0, 0.0, 1, SvrfVariant::kRestart, 3);

  std::vector<Vector> svrf_iterates;
  Vector x0;
  svrf_run(f, d, Vector::Zero(7), c, {}, [&](const SvrfStepView& v) {
    if (v.k == 0) x0 = v.w;
    else svrf_iterates.push_back(v.w);
  });

  FwConfig fc;
  fc.gap_tol = -std::numeric_limits<double>::infinity();
  fc.max_iter = epoch_length(1) + 1;
  std::vector<Vector> fw_iterates;
  frank_wolfe(f, d, x0, fc, {}, [&](const FwIterationView& v) {
    if (v.k >= 1) fw_iterates.push_back(v.x_prev);
  });
  ASSERT_EQ(svrf_iterates.size(), epoch_length(1));
  ASSERT_EQ(fw_iterates.size(), epoch_length(1));
  for (std::size_t k = 0; k < svrf_iterates.size(); ++k)
    EXPECT_LE((svrf_iterates[k] - fw_iterates[k]).norm(), 1e-12) << "k=" << k;

  // Both variants share the first epoch.
  c.variant = SvrfVariant::kStable;
  std::vector<Vector> stable;
  svrf_run(f, d, Vector::Zero(7), c, {}, [&](const SvrfStepView& v) {
    if (v.k > 0) stable.push_back(v.w);
  });
  ASSERT_EQ(stable.size(), svrf_iterates.size());
  for (std::size_t k = 0; k < stable.size(); ++k)
    EXPECT_EQ(stable[k], svrf_iterates[k]);
}

TEST(SvrfRunTest, StableVariantBoundOnSampledIterates) {
  const auto f = make_least_squares_sum(500, 50, 2.0, 2026);
  const double alpha = 1.0, delta = 0.1;
  const double fstar = l1_lower_bound(f, alpha, 20000);
  const double bound_scale = 4.0 * f.smoothness() * 4.0 * alpha * alpha * 1.1;
  const std::vector<std::size_t> sampled = {1, 5, 14, 30, 62};
  std::vector<double> sums(sampled.size(), 0.0);
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    SvrfConfig c = l1_config(f, alpha, delta, 3, SvrfVariant::kStable, s);
    svrf_run(f, Domain::l1(50, alpha), Vector::Zero(50), c, {},
             [&](const SvrfStepView& v) {
               const auto it = std::find(sampled.begin(), sampled.end(), v.k);
               if (v.k > 0 && it != sampled.end())
                 sums[it - sampled.begin()] += f.value(v.w) - fstar;
             });
  }
  for (std::size_t j = 0; j < sampled.size(); ++j) {
    const double bound = bound_scale / (static_cast<double>(sampled[j]) + 2.0);
    EXPECT_LE(sums[j] / seeds, bound) << "k=" << sampled[j];
  }
}

TEST(SvrfRunTest, StableTrajectoryImproves) {
  const auto f = make_least_squares_sum(200, 20, 1.0, 31);
  const double fstar = l1_lower_bound(f, 1.0, 20000);
  SvrfConfig c = l1_config(f, 1.0, 0.1, 4, SvrfVariant::kStable, 8);
  c.batch_multiplier = 0.25;
  double at_first = 0.0, at_last = 0.0;
  svrf_run(f, Domain::l1(20, 1.0), Vector::Zero(20), c, {},
           [&](const SvrfStepView& v) {
             if (v.k == epoch_length(1)) at_first = f.value(v.w) - fstar;
             if (v.k == epoch_length(4)) at_last = f.value(v.w) - fstar;
           });
  EXPECT_LT(at_last, at_first);
}

TEST(SvrfRunTest, RejectsBadConfig) {
  const auto f = make_least_squares_sum(10, 3, 1.0, 1);
  SvrfConfig c = l1_config(f, 1.0, 0.1, 0, SvrfVariant::kRestart, 0);
  EXPECT_THROW(svrf_run(f, Domain::l1(3, 1.0), Vector::Zero(3), c),
               ParameterError);
  c.epochs = 1;
  EXPECT_THROW(svrf_run(f, Domain::l1(3, 1.0), Vector::Constant(3, 1.0), c),
               InputError);
}

TEST(SvrfRunTest, NuclearDomainOnCompletion) {
  const auto inst = make_rectangular_completion(10, 8, 2, 0.0, 0.7, 4);
  const CompletionObjective obj(inst, Scaling::kMean);
  const double alpha = nuclear_norm(inst.truth());
  SvrfConfig c;
  c.delta = 0.1;
  c.diameter = 2 * alpha;
  c.epochs = 3;
  c.batch_multiplier = 0.2;
  c.seed = 5;
  const auto r = svrf_run(obj, Domain::nuclear(10, 8, alpha), Vector::Zero(80), c);
  EXPECT_LT(r.trace.epoch_objective.back(), r.trace.initial_objective);
  EXPECT_LE(nuclear_norm(unflatten(r.x, 10, 8)), alpha * (1 + 1e-9));
}

}  // namespace
}  // namespace fws
