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

// Sketched SVRF for matrix completion over the nuclear-norm ball. The m x n
// iterate W_k is never formed: the run keeps the dual variable z_k = A W_k
// (one float per observation) and a SketchState of W_k, and recovers a rank-r
// factorization from the sketch at the end.

#ifndef FWSCALE_SSVRF_HPP_
#define FWSCALE_SSVRF_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fwscale/problems.hpp"
#include "fwscale/sketch.hpp"
#include "fwscale/svrf.hpp"

namespace fws {

struct SsvrfOptions {
  // Reconstruct after every epoch (factors in SsvrfResult::epoch_factors).
  bool reconstruct_each_epoch = false;
  // Test mode: keep a dense shadow iterate and check z = A W and the sketch
  // identities after every step.
  bool shadow = false;
};

struct SsvrfStepView {
  std::size_t t;
  std::size_t k;  // 0 for the initialization step
  const Vector& z;
  const OracleAnswer& answer;
};

using SsvrfObserver = std::function<void(const SsvrfStepView&)>;

struct SsvrfResult {
  SvdFactors factors;
  EpochTrace trace;
  std::vector<SvdFactors> epoch_factors;
  // Floats held for the decision variable: sketch buffers plus z.
  std::size_t decision_floats = 0;
  std::size_t sketch_floats = 0;
  std::size_t dual_floats = 0;
  // Shadow mode only: worst relative deviations seen.
  double max_dual_deviation = 0.0;
  double max_sketch_deviation = 0.0;
};

// Measurement-space variance-reduced gradient:
//   grad(z0) + (1/m) sum_{i in batch} (grad_i(z) - grad_i(z0)).
// Throws ParameterError on an empty batch.
Vector dual_gradient(const CompletionObjective& objective, const Vector& z,
                     const Vector& z0, const Vector& full_grad_z0,
                     const std::vector<std::size_t>& batch);

// Requires alpha > 0, rank >= 1 and a mean-scaled objective; the objective is
// built from the instance. T comes from config.epochs.
SsvrfResult ssvrf_run(const CompletionInstance& inst, double alpha,
                      std::size_t rank, const SvrfConfig& config,
                      const SsvrfOptions& options = {},
                      const SsvrfObserver& observer = {});

}  // namespace fws

#endif  // FWSCALE_SSVRF_HPP_
