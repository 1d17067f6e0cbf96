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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

namespace fws {

namespace {

constexpr std::uint64_t kSketchStream = 0x5e;

double relative_gap(const DenseMatrix& a, const DenseMatrix& b) {
  const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / scale;
}

}  // namespace

Vector dual_gradient(const CompletionObjective& objective, const Vector& z,
                     const Vector& z0, const Vector& full_grad_z0,
                     const std::vector<std::size_t>& batch) {
  if (batch.empty()) throw ParameterError("empty minibatch");
  const std::size_t d = objective.num_terms();
  Vector diff = Vector::Zero(z.size());
  for (std::size_t i : batch) {
    if (i >= d) throw ParameterError("minibatch index out of range");
    objective.add_term_measurement_grad(i, z, 1.0, diff);
    objective.add_term_measurement_grad(i, z0, -1.0, diff);
  }
  Vector out = full_grad_z0;
  out += (1.0 / static_cast<double>(batch.size())) * diff;
  return out;
}

SsvrfResult ssvrf_run(const CompletionInstance& inst, double alpha,
                      std::size_t rank, const SvrfConfig& config,
                      const SsvrfOptions& options,
                      const SsvrfObserver& observer) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ParameterError("ssvrf needs alpha > 0");
  if (rank < 1) throw ParameterError("ssvrf needs rank >= 1");
  if (config.epochs < 1) throw ParameterError("need at least one epoch");
  if (!(config.delta >= 0.0) || !(config.smoothness > 0.0) ||
      !(config.diameter > 0.0))
    throw ParameterError("ssvrf needs delta >= 0, L > 0, D > 0");
  if (config.variant != SvrfVariant::kRestart)
    throw ParameterError("ssvrf runs restart-style epochs only");

  const CompletionObjective objective(inst, Scaling::kMean);
  const auto& sampling = objective.sampling();
  const Domain domain = Domain::nuclear(inst.rows, inst.cols, alpha);
  const std::size_t terms = objective.num_terms();
  const double eps_scale =
      0.5 * config.smoothness * config.diameter * config.diameter * config.delta;

  SketchState sketch(inst.rows, inst.cols, rank,
                     derive_seed(config.seed, kSketchStream));
  std::optional<DenseMatrix> shadow;
  if (options.shadow) {
    sketch.enable_shadow();
    shadow = DenseMatrix::Zero(inst.rows, inst.cols);
  }

  const auto t_start = std::chrono::steady_clock::now();
  SsvrfResult result;
  EpochTrace& trace = result.trace;
  Vector z = Vector::Zero(static_cast<Eigen::Index>(sampling->num_measurements()));

  auto ask = [&](const Vector& g, double eps, std::size_t t, std::size_t k) {
    const Gradient grad = Gradient::sampled(sampling, g);
    try {
      const OracleRequest req =
          request_for_eps(domain, grad, eps, oracle_seed(config.seed, t, k));
      return lmo_nuclear(grad.as_operator(), alpha, req.xi, req.seed);
    } catch (const Error& e) {
      throw SvrfFailure(e, trace);
    }
  };

  // z <- (1 - gamma) z + gamma A(-alpha u v^T); the sketch and the optional
  // shadow follow the same convex combination.
  auto step = [&](double gamma, const OracleAnswer& a) {
    const auto& atom = std::get<RankOneAtom>(a.atom);
    const double c = gamma * atom.scale;
    z *= (1.0 - gamma);
    z += sampling->apply_rank_one(c, atom.left, atom.right);
    sketch.update(1.0 - gamma, c, atom.left, atom.right);
    if (shadow) {
      *shadow *= (1.0 - gamma);
      shadow->noalias() += c * atom.left * atom.right.transpose();
      result.max_dual_deviation =
          std::max(result.max_dual_deviation,
                   relative_gap(z, sampling->apply(*shadow)));
      result.max_sketch_deviation = std::max(
          {result.max_sketch_deviation,
           relative_gap(sketch.range_sketch(), *shadow * sketch.psi()),
           relative_gap(sketch.corange_sketch(), sketch.phi() * *shadow)});
    }
  };

  // Initialization at W_{-1} = 0.
  {
    const Vector g = objective.measurement_grad(z);
    const OracleAnswer a =
        ask(g, initial_eps(config.smoothness, config.diameter, config.delta), 0,
            0);
    step(1.0, a);
    if (observer) observer(SsvrfStepView{0, 0, z, a});
  }
  trace.initial_objective = objective.value_from_measurements(z);

  for (std::size_t t = 1; t <= config.epochs; ++t) {
    const Vector z0 = z;
    const Vector g0 = objective.measurement_grad(z0);
    const std::size_t n_t = epoch_length(t, config.epoch_multiplier);
    for (std::size_t k = 1; k <= n_t; ++k) {
      const double gamma = 2.0 / (static_cast<double>(k) + 1.0);
      const double eps = eps_scale * gamma;
      const std::size_t m = batch_size(k, config.batch_multiplier);
      const auto batch = sample_batch(config.seed, t, k, m, terms);
      const Vector g = dual_gradient(objective, z, z0, g0, batch);
      const OracleAnswer a = ask(g, eps, t, k);
      step(gamma, a);

      InnerRecord rec;
      rec.t = t;
      rec.k = k;
      rec.batch_size = m;
      rec.objective = config.evaluate_inner_objective
                          ? objective.value_from_measurements(z)
                          : std::numeric_limits<double>::quiet_NaN();
      rec.eps = eps;
      rec.xi = a.tolerance_used;
      rec.gamma = gamma;
      trace.inner.push_back(rec);
      if (observer) observer(SsvrfStepView{t, k, z, a});
    }
    trace.inner_counts.push_back(n_t);
    trace.epoch_objective.push_back(objective.value_from_measurements(z));
    trace.epoch_wall_s.push_back(std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - t_start)
                                     .count());
    if (options.reconstruct_each_epoch)
      result.epoch_factors.push_back(sketch_reconstruct(sketch, rank));
  }

  result.factors = sketch_reconstruct(sketch, rank);
  result.sketch_floats = sketch.buffer_floats();
  result.dual_floats = static_cast<std::size_t>(z.size());
  result.decision_floats = result.sketch_floats + result.dual_floats;
  return result;
}

}  // namespace fws
