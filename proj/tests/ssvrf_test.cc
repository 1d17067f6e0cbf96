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

#include "fwscale/ssvrf.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "fwscale/errors.hpp"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fws {
namespace {

class DualGradientTest : public ::testing::Test {
 protected:
  DualGradientTest()
      : inst_(make_rectangular_completion(12, 9, 2, 0.1, 0.6, 3)),
        obj_(inst_, Scaling::kMean) {
    Rng rng(4);
    z_ = gaussian_vector(inst_.num_observed(), rng);
    z0_ = gaussian_vector(inst_.num_observed(), rng);
  }
  CompletionInstance inst_;
  CompletionObjective obj_;
  Vector z_, z0_;
};

TEST_F(DualGradientTest, SnapshotReturnsFullGradient) {
  const Vector g0 = obj_.measurement_grad(z0_);
  EXPECT_EQ(dual_gradient(obj_, z0_, z0_, g0, {0, 5, 5}), g0);
}

TEST_F(DualGradientTest, FullBatchIsMeanResidual) {
  std::vector<std::size_t> all(obj_.num_terms());
  std::iota(all.begin(), all.end(), 0);
  const Vector g =
      dual_gradient(obj_, z_, z0_, obj_.measurement_grad(z0_), all);
  const Vector expected =
      (z_ - inst_.observed) / static_cast<double>(obj_.num_terms());
  EXPECT_LE((g - expected).norm(), 1e-13 * expected.norm());
}

TEST_F(DualGradientTest, UnbiasedMonteCarlo) {
  const Vector g0 = obj_.measurement_grad(z0_);
  const Vector truth = obj_.measurement_grad(z_);
  Rng rng(5);
  const Vector w = gaussian_vector(z_.size(), rng);
  const int samples = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double e =
        w.dot(dual_gradient(obj_, z_, z0_, g0, sample_batch(6, 1, s, 1,
                                                            obj_.num_terms())));
    sum += e;
    sumsq += e * e;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sumsq / samples - mean * mean) / samples);
  EXPECT_LE(std::abs(mean - w.dot(truth)), 3.0 * se);
}

TEST_F(DualGradientTest, RejectsEmptyBatch) {
  EXPECT_THROW(dual_gradient(obj_, z_, z0_, z0_, {}), ParameterError);
}

SvrfConfig config_for(double alpha, std::size_t epochs, std::uint64_t seed) {
  SvrfConfig c;
  c.delta = 0.1;
  c.smoothness = 1.0;
  c.diameter = 2.0 * alpha;
  c.epochs = epochs;
  c.seed = seed;
  return c;
}

TEST(SsvrfRunTest, RecoversNoiselessLowRankMatrix) {
  const auto inst = make_rectangular_completion(20, 15, 2, 0.0, 1.0, 11);
  const double alpha = nuclear_norm(inst.truth());
  const auto r = ssvrf_run(inst, alpha, 2, config_for(alpha, 6, 7));
  const DenseMatrix xhat = r.factors.reconstruct();
  EXPECT_LE(relative_metrics(xhat, inst).rel_err, 1e-2);
}

TEST(SsvrfRunTest, MemoryIsSketchPlusDual) {
  const auto inst = make_rectangular_completion(20, 15, 2, 0.1, 0.7, 12);
  const double alpha = nuclear_norm(inst.truth());
  const std::size_t r = 3;
  const auto res = ssvrf_run(inst, alpha, r, config_for(alpha, 1, 1));
  EXPECT_EQ(res.sketch_floats, 20 * (2 * r + 1) + (4 * r + 3) * 15);
  EXPECT_EQ(res.dual_floats, inst.num_observed());
  EXPECT_EQ(res.decision_floats,
            20 * (2 * r + 1) + (4 * r + 3) * 15 + inst.num_observed());
}

TEST(SsvrfRunTest, ShadowStaysConsistent) {
  const auto inst = make_rectangular_completion(10, 8, 2, 0.1, 0.8, 13);
  const double alpha = nuclear_norm(inst.truth());
  SsvrfOptions opt;
  opt.shadow = true;
  const auto r = ssvrf_run(inst, alpha, 2, config_for(alpha, 3, 2), opt);
  EXPECT_LE(r.max_dual_deviation, 1e-10);
  EXPECT_LE(r.max_sketch_deviation, 1e-10);
}

// The measurement-space run follows the dense variance-reduced run exactly.
TEST(SsvrfRunTest, DualTraceMatchesDenseRun) {
  const auto inst = make_rectangular_completion(20, 15, 2, 0.1, 0.7, 12);
  const double alpha = nuclear_norm(inst.truth());
  const SvrfConfig c = config_for(alpha, 3, 7);
  const CompletionObjective obj(inst, Scaling::kMean);

  std::vector<Vector> dense;
  svrf_run(obj, Domain::nuclear(20, 15, alpha), Vector::Zero(300), c, {},
           [&](const SvrfStepView& v) {
             dense.push_back(inst.sampling->apply(v.w));
           });
  std::vector<Vector> dual;
  ssvrf_run(inst, alpha, 2, c, {},
            [&](const SsvrfStepView& v) { dual.push_back(v.z); });
  ASSERT_EQ(dense.size(), dual.size());
  for (std::size_t i = 0; i < dense.size(); ++i)
    EXPECT_LE((dense[i] - dual[i]).norm(), 1e-10 * (1.0 + dense[i].norm()))
        << "step " << i;
}

TEST(SsvrfRunTest, EpochReconstructions) {
  const auto inst = make_rectangular_completion(12, 10, 1, 0.0, 1.0, 4);
  const double alpha = nuclear_norm(inst.truth());
  SsvrfOptions opt;
  opt.reconstruct_each_epoch = true;
  const auto r = ssvrf_run(inst, alpha, 1, config_for(alpha, 3, 3), opt);
  ASSERT_EQ(r.epoch_factors.size(), 3u);
  EXPECT_EQ(r.epoch_factors.back().reconstruct(), r.factors.reconstruct());
}

TEST(SsvrfRunTest, RejectsBadArguments) {
  const auto inst = make_rectangular_completion(6, 5, 1, 0.0, 1.0, 1);
  EXPECT_THROW(ssvrf_run(inst, 0.0, 1, config_for(1.0, 1, 0)), ParameterError);
  EXPECT_THROW(ssvrf_run(inst, 1.0, 0, config_for(1.0, 1, 0)), ParameterError);
  SvrfConfig stable = config_for(1.0, 1, 0);
  stable.variant = SvrfVariant::kStable;
  EXPECT_THROW(ssvrf_run(inst, 1.0, 1, stable), ParameterError);
}

}  // namespace
}  // namespace fws
