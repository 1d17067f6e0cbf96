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

// Stochastic variance-reduced Frank-Wolfe with an approximate oracle.
//
// Each epoch t takes a snapshot w0 = x_{t-1}, computes grad f(w0), and runs
// inner steps
//
//   g_k = grad f(w0) + (1/m_k) sum_{i in batch} (grad f_i(w_{k-1}) - grad f_i(w0))
//   v_k with <g_k, v_k> <= min_v <g_k, v> + eps_k
//   w_k = (1 - gamma_k) w_{k-1} + gamma_k v_k
//
// with gamma_k = 2/(k+1), m_k = 96(k+1), N_t = 2^{t+3} - 2 and
// eps_k = (L D^2 / 2) gamma_k delta. The restart variant resets k to 1 every
// epoch; the stable variant keeps counting, epoch t covering k in
// {N_{t-1}+1, ..., N_t}.

#ifndef FWSCALE_SVRF_HPP_
#define FWSCALE_SVRF_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fwscale/errors.hpp"
#include "fwscale/lmo.hpp"
#include "fwscale/problems.hpp"

namespace fws {

enum class SvrfVariant { kRestart, kStable };
const char* to_string(SvrfVariant v);

struct SvrfConfig {
  double delta = 0.0;
  double smoothness = 1.0;  // per-term L
  double diameter = 1.0;    // D
  std::size_t epochs = 1;   // T
  SvrfVariant variant = SvrfVariant::kRestart;
  // Multipliers on m_k and N_t. 1.0 reproduces the exact schedules.
  double batch_multiplier = 1.0;
  double epoch_multiplier = 1.0;
  std::uint64_t seed = 0;
  // Evaluate f(w_k) after every inner step (a full data pass each).
  bool evaluate_inner_objective = false;
};

struct SvrfSchedule {
  double gamma;
  std::size_t batch_size;    // m_k
  std::size_t epoch_length;  // N_t
  double eps;
};

// k >= 1, t >= 1. Throws ParameterError otherwise.
SvrfSchedule default_schedules(std::size_t k, std::size_t t, double smoothness,
                               double diameter, double delta);

std::size_t batch_size(std::size_t k, double multiplier = 1.0);
// N_t, with N_0 = 0.
std::size_t epoch_length(std::size_t t, double multiplier = 1.0);
// eps_0 for the initialization oracle call: (L D^2 / 2) delta.
double initial_eps(double smoothness, double diameter, double delta);

// m indices drawn i.i.d. uniformly from [0, d); a pure function of
// (seed, t, k).
std::vector<std::size_t> sample_batch(std::uint64_t seed, std::size_t t,
                                      std::size_t k, std::size_t m,
                                      std::size_t d);
// Seed for the oracle call at (t, k); the initialization step uses (0, 0).
std::uint64_t oracle_seed(std::uint64_t seed, std::size_t t, std::size_t k);

// Average over the batch of grad f_i(x) - grad f_i(x0) + grad f(x0).
// Throws ParameterError on an empty batch or out-of-range index.
Gradient variance_reduced_gradient(const FiniteSumObjective& objective,
                                   const Vector& x, const Vector& x0,
                                   const Gradient& full_grad_x0,
                                   const std::vector<std::size_t>& batch);

// Oracle request for an eps budget: spectral domains get xi from the residual
// model, the l1 oracle is exact regardless.
OracleRequest request_for_eps(const Domain& domain, const Gradient& g,
                              double eps, std::uint64_t seed);

struct InnerRecord {
  std::size_t t = 0;
  std::size_t k = 0;
  std::size_t batch_size = 0;
  double objective = 0.0;  // NaN unless evaluate_inner_objective
  double eps = 0.0;
  double xi = 0.0;
  double gamma = 0.0;
};

struct EpochTrace {
  std::vector<InnerRecord> inner;
  double initial_objective = 0.0;       // f(x_0)
  std::vector<double> epoch_objective;  // f(x_t), t = 1..T
  std::vector<std::size_t> inner_counts;
  std::vector<double> epoch_wall_s;     // cumulative wall time at epoch end
};

struct SvrfStepView {
  std::size_t t;
  std::size_t k;  // 0 for the initialization step
  const Vector& w;  // iterate after the update
  const Gradient& estimate;
  const OracleAnswer& answer;
};

using SvrfObserver = std::function<void(const SvrfStepView&)>;

struct SvrfResult {
  Vector x;
  EpochTrace trace;
};

class SvrfFailure : public Error {
 public:
  SvrfFailure(const Error& cause, EpochTrace partial)
      : Error(cause.kind(), cause.what()), partial_(std::move(partial)) {}
  const EpochTrace& partial_trace() const { return partial_; }

 private:
  EpochTrace partial_;
};

// x_init plays the role of w_{-1}; x_0 comes from one oracle call at
// grad f(w_{-1}) with tolerance eps_0.
SvrfResult svrf_run(const FiniteSumObjective& objective, const Domain& domain,
                    const Vector& x_init, const SvrfConfig& config,
                    const Oracle& oracle = {},
                    const SvrfObserver& observer = {});

}  // namespace fws

#endif  // FWSCALE_SVRF_HPP_
