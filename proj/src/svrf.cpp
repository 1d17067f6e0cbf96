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

#include <chrono>
#include <cmath>
#include <limits>

namespace fws {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kBatchStream = 0x5a;
constexpr std::uint64_t kOracleStream = 0x0c;

void check_multiplier(double m) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw ParameterError("schedule multiplier must be positive");
}

std::size_t scaled(double base, double multiplier) {
  check_multiplier(multiplier);
  if (multiplier == 1.0) return static_cast<std::size_t>(base);
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(base * multiplier)));
}

}  // namespace

const char* to_string(SvrfVariant v) {
  return v == SvrfVariant::kRestart ? "restart" : "stable";
}

std::size_t batch_size(std::size_t k, double multiplier) {
  return scaled(96.0 * static_cast<double>(k + 1), multiplier);
}

std::size_t epoch_length(std::size_t t, double multiplier) {
  if (t == 0) return 0;
  if (t > 60) throw ParameterError("epoch index too large");
  return scaled(std::ldexp(1.0, static_cast<int>(t) + 3) - 2.0, multiplier);
}

double initial_eps(double smoothness, double diameter, double delta) {
  return 0.5 * smoothness * diameter * diameter * delta;
}

SvrfSchedule default_schedules(std::size_t k, std::size_t t, double smoothness,
                               double diameter, double delta) {
  if (k < 1 || t < 1) throw ParameterError("schedules need k >= 1 and t >= 1");
  SvrfSchedule s;
  s.gamma = 2.0 / (static_cast<double>(k) + 1.0);
  s.batch_size = batch_size(k);
  s.epoch_length = epoch_length(t);
  s.eps = 0.5 * smoothness * diameter * diameter * s.gamma * delta;
  return s;
}

std::vector<std::size_t> sample_batch(std::uint64_t seed, std::size_t t,
                                      std::size_t k, std::size_t m,
                                      std::size_t d) {
  if (d == 0) throw ParameterError("cannot sample from zero terms");
  Rng rng(derive_seed(seed, kBatchStream, t, k));
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::vector<std::size_t> batch(m);
  for (auto& i : batch) i = pick(rng);
  return batch;
}

std::uint64_t oracle_seed(std::uint64_t seed, std::size_t t, std::size_t k) {
  return derive_seed(seed, kOracleStream, t, k);
}

Gradient variance_reduced_gradient(const FiniteSumObjective& objective,
                                   const Vector& x, const Vector& x0,
                                   const Gradient& full_grad_x0,
                                   const std::vector<std::size_t>& batch) {
  if (batch.empty()) throw ParameterError("empty minibatch");
  const std::size_t d = objective.num_terms();
  // Differences accumulate separately so that x == x0 reproduces the snapshot
  // gradient bit for bit.
  Gradient diff = objective.zero_grad();
  for (std::size_t i : batch) {
    if (i >= d) throw ParameterError("minibatch index out of range");
    objective.add_term_grad(i, x, 1.0, diff);
    objective.add_term_grad(i, x0, -1.0, diff);
  }
  Gradient out = full_grad_x0;
  out.axpy(1.0 / static_cast<double>(batch.size()), diff);
  return out;
}

OracleRequest request_for_eps(const Domain& domain, const Gradient& g,
                              double eps, std::uint64_t seed) {
  OracleRequest r;
  r.eps = eps;
  r.seed = seed;
  r.xi = domain.kind == DomainKind::kL1
             ? 0.0
             : xi_for_suboptimality(eps, domain.radius, g);
  return r;
}

SvrfResult svrf_run(const FiniteSumObjective& objective, const Domain& domain,
                    const Vector& x_init, const SvrfConfig& config,
                    const Oracle& oracle, const SvrfObserver& observer) {
  const Shape shape = domain.shape;
  if (objective.shape().size() != shape.size() ||
      static_cast<std::size_t>(x_init.size()) != shape.size())
    throw InputError("objective, domain and start point shapes differ");
  if (!domain.contains(x_init, 1e-10))
    throw InputError("start point is not feasible for the domain");
  if (config.epochs < 1) throw ParameterError("need at least one epoch");
  if (!(config.delta >= 0.0) || !(config.smoothness > 0.0) ||
      !(config.diameter > 0.0))
    throw ParameterError("svrf needs delta >= 0, L > 0, D > 0");
  check_multiplier(config.batch_multiplier);
  check_multiplier(config.epoch_multiplier);

  const Oracle fallback = solve_lmo;
  const Oracle& call = oracle ? oracle : fallback;
  const std::size_t d = objective.num_terms();
  const double eps_scale =
      0.5 * config.smoothness * config.diameter * config.diameter * config.delta;
  const Clock::time_point t0 = Clock::now();

  SvrfResult result;
  EpochTrace& trace = result.trace;
  auto ask = [&](const Gradient& g, double eps, std::size_t t, std::size_t k) {
    try {
      return call(domain, g,
                  request_for_eps(domain, g, eps, oracle_seed(config.seed, t, k)));
    } catch (const Error& e) {
      throw SvrfFailure(e, trace);
    }
  };

  // Initialization: x_0 from one oracle call at w_{-1} = x_init.
  Vector x = x_init;
  {
    const Gradient g = objective.full_grad(x);
    const OracleAnswer a = ask(g, initial_eps(config.smoothness,
                                              config.diameter, config.delta),
                               0, 0);
    blend_atom(x, 1.0, a.atom, shape);
    if (observer) observer(SvrfStepView{0, 0, x, g, a});
  }
  trace.initial_objective = objective.value(x);

  Vector w = x;
  std::size_t k_global = 0;
  for (std::size_t t = 1; t <= config.epochs; ++t) {
    const Vector x0 = x;
    const Gradient g0 = objective.full_grad(x0);
    std::size_t k_first = 1, k_last = 0;
    if (config.variant == SvrfVariant::kRestart) {
      w = x0;
      k_last = epoch_length(t, config.epoch_multiplier);
    } else {
      k_first = k_global + 1;
      k_last = epoch_length(t, config.epoch_multiplier);
      if (k_last < k_first) k_last = k_first;
    }
    std::size_t count = 0;
    for (std::size_t k = k_first; k <= k_last; ++k, ++count) {
      const double gamma = 2.0 / (static_cast<double>(k) + 1.0);
      const double eps = eps_scale * gamma;
      const std::size_t m = batch_size(k, config.batch_multiplier);
      const auto batch = sample_batch(config.seed, t, k, m, d);
      const Gradient est = variance_reduced_gradient(objective, w, x0, g0, batch);
      const OracleAnswer a = ask(est, eps, t, k);
      blend_atom(w, gamma, a.atom, shape);

      InnerRecord rec;
      rec.t = t;
      rec.k = k;
      rec.batch_size = m;
      rec.objective = config.evaluate_inner_objective
                          ? objective.value(w)
                          : std::numeric_limits<double>::quiet_NaN();
      rec.eps = eps;
      rec.xi = a.tolerance_used;
      rec.gamma = gamma;
      trace.inner.push_back(rec);
      if (observer) observer(SvrfStepView{t, k, w, est, a});
    }
    k_global = k_last;
    x = w;
    trace.inner_counts.push_back(count);
    trace.epoch_objective.push_back(objective.value(x));
    trace.epoch_wall_s.push_back(
        std::chrono::duration<double>(Clock::now() - t0).count());
  }
  result.x = std::move(x);
  return result;
}

}  // namespace fws
