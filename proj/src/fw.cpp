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

#include <chrono>
#include <cmath>
#include <limits>

namespace fws {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

double StepRule::at(std::size_t k) const {
  if (kind == Kind::kConstant) return constant;
  return 2.0 / (static_cast<double>(k) + 2.0);
}

ToleranceRule ToleranceRule::constant_xi(double xi) {
  if (!(xi >= 0.0)) throw ParameterError("constant xi must be >= 0");
  ToleranceRule r;
  r.kind = Kind::kConstantXi;
  r.xi = xi;
  return r;
}

ToleranceRule ToleranceRule::theorem1(double smoothness, double diameter,
                                      double delta) {
  if (!(smoothness > 0.0) || !(diameter > 0.0) || !(delta >= 0.0))
    throw ParameterError("theorem1 rule needs L > 0, D > 0, delta >= 0");
  ToleranceRule r;
  r.kind = Kind::kTheorem1;
  r.smoothness = smoothness;
  r.diameter = diameter;
  r.delta = delta;
  return r;
}

double ToleranceRule::eps(double gamma) const {
  switch (kind) {
    case Kind::kExact:
      return 0.0;
    case Kind::kTheorem1:
      return 0.5 * smoothness * diameter * diameter * gamma * delta;
    case Kind::kConstantXi:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kGapMet:
      return "gap-met";
    case Termination::kMaxIter:
      return "max-iter";
    case Termination::kTimeBudget:
      return "time-budget";
  }
  return "unknown";
}

double duality_gap(const Vector& x, const Gradient& grad,
                   const OracleAnswer& answer) {
  return grad.dot(x) - answer.inner;
}

FwResult frank_wolfe(const FiniteSumObjective& objective, const Domain& domain,
                     const Vector& x_init, const FwConfig& config,
                     const Oracle& oracle, const FwObserver& observer) {
  const Shape shape = domain.shape;
  if (objective.shape().size() != shape.size() ||
      static_cast<std::size_t>(x_init.size()) != shape.size())
    throw InputError("objective, domain and start point shapes differ");
  if (!domain.contains(x_init, 1e-10))
    throw InputError("start point is not feasible for the domain");
  if (config.time_budget_s && !(*config.time_budget_s > 0.0))
    throw ParameterError("time budget must be positive");
  const Oracle fallback = solve_lmo;
  const Oracle& call = oracle ? oracle : fallback;

  const Clock::time_point t0 = Clock::now();
  double observer_s = 0.0;
  FwResult result;
  IterateTrace& trace = result.trace;
  trace.termination = Termination::kMaxIter;
  Vector x = x_init;

  for (std::size_t k = 0; k < config.max_iter; ++k) {
    const Gradient g = objective.full_grad(x);
    const double gamma = config.step.at(k);
    const double eps = config.tolerance.eps(gamma);

    OracleRequest request;
    request.eps = eps;
    request.seed = derive_seed(config.seed, k);
    switch (config.tolerance.kind) {
      case ToleranceRule::Kind::kExact:
        request.xi = 0.0;
        break;
      case ToleranceRule::Kind::kConstantXi:
        request.xi = config.tolerance.xi;
        break;
      case ToleranceRule::Kind::kTheorem1:
        request.xi = xi_for_suboptimality(eps, domain.radius, g);
        break;
    }

    OracleAnswer answer;
    try {
      answer = call(domain, g, request);
    } catch (const Error& e) {
      trace.final_objective = objective.value(x);
      throw FwFailure(e, trace);
    }

    IterateRecord rec;
    rec.k = k;
    rec.objective = config.record_objective
                        ? objective.value(x)
                        : std::numeric_limits<double>::quiet_NaN();
    rec.gap = duality_gap(x, g, answer);
    rec.eps = eps;
    rec.xi = request.xi;
    rec.gamma = gamma;
    rec.atom = describe(answer.atom);
    rec.wall_s = seconds_since(t0) - observer_s;

    if (observer) {
      const Clock::time_point o0 = Clock::now();
      observer(FwIterationView{k, x, g, answer, request, rec});
      observer_s += seconds_since(o0);
    }
    trace.records.push_back(rec);

    if (rec.gap <= config.gap_tol) {
      trace.termination = Termination::kGapMet;
      break;
    }
    blend_atom(x, gamma, answer.atom, shape);
    if (config.time_budget_s && seconds_since(t0) >= *config.time_budget_s) {
      trace.termination = Termination::kTimeBudget;
      break;
    }
  }
  trace.final_objective = objective.value(x);
  result.x = std::move(x);
  return result;
}

}  // namespace fws
