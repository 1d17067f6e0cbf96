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

// Deterministic Frank-Wolfe with an approximate linear minimization oracle.
//
//   for k = 0, 1, 2, ...
//     v_k  with  <grad f(x_{k-1}), v_k> <= min_v <grad f(x_{k-1}), v> + eps_k
//     stop if <x_{k-1} - v_k, grad f(x_{k-1})> <= gap_tol
//     x_k = (1 - gamma_k) x_{k-1} + gamma_k v_k
//
// With eps_k == 0 this is the classical algorithm. Iterates are held densely.

#ifndef FWSCALE_FW_HPP_
#define FWSCALE_FW_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwscale/errors.hpp"
#include "fwscale/lmo.hpp"
#include "fwscale/problems.hpp"

namespace fws {

struct StepRule {
  enum class Kind { kOpenLoop, kConstant } kind = Kind::kOpenLoop;
  double constant = 0.1;

  // 2 / (k + 2) for the open-loop rule, so gamma_0 = 1.
  double at(std::size_t k) const;
};

struct ToleranceRule {
  enum class Kind { kExact, kConstantXi, kTheorem1 } kind = Kind::kExact;
  double xi = 0.0;  // kConstantXi
  double smoothness = 1.0;  // L
  double diameter = 1.0;    // D
  double delta = 0.0;

  static ToleranceRule exact() { return {}; }
  static ToleranceRule constant_xi(double xi);
  static ToleranceRule theorem1(double smoothness, double diameter,
                                double delta);

  // (L D^2 / 2) * gamma * delta for kTheorem1, 0 for kExact, NaN otherwise.
  double eps(double gamma) const;
};

struct FwConfig {
  double gap_tol = 0.0;  // use -infinity to disable the gap test
  StepRule step;
  ToleranceRule tolerance;
  std::size_t max_iter = 1000;
  // Wall-clock budget over the whole run, observer time included. Checked once
  // per iteration after the oracle call.
  std::optional<double> time_budget_s;
  std::uint64_t seed = 0;
  bool record_objective = true;
};

enum class Termination { kGapMet, kMaxIter, kTimeBudget };
const char* to_string(Termination t);

struct IterateRecord {
  std::size_t k = 0;
  double wall_s = 0.0;      // cumulative algorithm time, observer excluded
  double objective = 0.0;   // f(x_{k-1}) (NaN when not recorded)
  double gap = 0.0;         // <x_{k-1} - v_k, grad f(x_{k-1})>
  double eps = 0.0;         // scheduled eps_k (NaN for constant-xi)
  double xi = 0.0;          // tolerance handed to the oracle
  double gamma = 0.0;
  std::string atom;
};

struct IterateTrace {
  std::vector<IterateRecord> records;
  Termination termination = Termination::kMaxIter;
  double final_objective = 0.0;
};

// Everything an observer may inspect at iteration k, before the update.
struct FwIterationView {
  std::size_t k;
  const Vector& x_prev;
  const Gradient& gradient;
  const OracleAnswer& answer;
  const OracleRequest& request;
  const IterateRecord& record;
};

using FwObserver = std::function<void(const FwIterationView&)>;

struct FwResult {
  Vector x;
  IterateTrace trace;
};

// An oracle failure mid-run, with the trace recorded up to that point. Keeps
// the ErrorKind of the underlying failure.
class FwFailure : public Error {
 public:
  FwFailure(const Error& cause, IterateTrace partial)
      : Error(cause.kind(), cause.what()), partial_(std::move(partial)) {}
  const IterateTrace& partial_trace() const { return partial_; }

 private:
  IterateTrace partial_;
};

// Throws InputError for an infeasible start and FwFailure when the oracle
// fails.
FwResult frank_wolfe(const FiniteSumObjective& objective, const Domain& domain,
                     const Vector& x_init, const FwConfig& config,
                     const Oracle& oracle = {},
                     const FwObserver& observer = {});

// <x - v, grad f(x)>.
double duality_gap(const Vector& x, const Gradient& grad,
                   const OracleAnswer& answer);

}  // namespace fws

#endif  // FWSCALE_FW_HPP_
