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

// Convergence-bound verification suites. Each suite runs the algorithms on a
// constructed instance and compares a measured quantity against the bound
// the theory gives for it.

#ifndef FWSCALE_VERIFY_HPP_
#define FWSCALE_VERIFY_HPP_

#include <vector>

#include "fwscale/bench.hpp"

namespace fws {

// FW on f(x) = 1/2 ||x||^2 over the unit l1 ball from e_1, 500 iterations:
// exact oracle and an adversarial oracle that is exactly eps_k suboptimal.
std::vector<CriterionReport> verify_fw_rate();

// SVRF (restart, exact schedules) on a 500-term least-squares sum over the
// unit l1 ball, 20 seeds, epochs 1..4.
std::vector<CriterionReport> verify_svrf_rate();

// Sketch reconstruction error on 50 x 50 matrices, r = 5, 100 draws per
// spectrum, plus exact recovery for rank <= r.
std::vector<CriterionReport> verify_sketch_error();

// Second moment of the variance-reduced gradient error, 1e4 samples.
std::vector<CriterionReport> verify_variance_bound();

// Timed FW completion grid; checks the per-cell trends on the produced rows.
std::vector<CriterionReport> verify_replication(const ExperimentConfig& config);
std::vector<CriterionReport> check_replication(
    const ExperimentConfig& config, const std::vector<MetricRow>& rows);

// SSVRF measurement trace against dense SVRF, and decision-variable storage.
std::vector<CriterionReport> verify_ssvrf_equivalence();

// Lanczos against dense eigen/singular decompositions, 50 random 100 x 100.
std::vector<CriterionReport> verify_spectral_accuracy();

// Distance of the SSVRF reconstructions to the unique solution of a noiseless
// completion problem: decreasing trend and square-root error bound.
std::vector<CriterionReport> verify_solution_distance();

}  // namespace fws

#endif  // FWSCALE_VERIFY_HPP_
