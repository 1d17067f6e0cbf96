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

// Linear minimization oracles over the l1 ball, the nuclear-norm ball and the
// PSD part of the nuclear-norm ball. Each answer is a single extreme point of
// the feasible set; ties go to the smallest index / first converged Ritz pair.

#ifndef FWSCALE_LMO_HPP_
#define FWSCALE_LMO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <variant>

#include "fwscale/problems.hpp"
#include "fwscale/spectral.hpp"
#include "fwscale/types.hpp"

namespace fws {

enum class DomainKind { kL1, kNuclear, kPsdNuclear };

struct Domain {
  DomainKind kind = DomainKind::kL1;
  double radius = 1.0;  // alpha
  Shape shape;

  static Domain l1(std::size_t n, double alpha);
  static Domain nuclear(std::size_t rows, std::size_t cols, double alpha);
  static Domain psd_nuclear(std::size_t n, double alpha);

  // Euclidean (Frobenius) diameter of the set.
  double diameter() const;
  // ||x||_1, ||X||_* or trace(X) (after a PSD check); throws InputError for a
  // non-symmetric or indefinite point in the PSD domain.
  double gauge(const Vector& x) const;
  bool contains(const Vector& x, double rel_tol = 1e-10) const;
};

const char* to_string(DomainKind kind);

// value * e_index
struct BasisAtom {
  std::size_t index = 0;
  double value = 0.0;
};

// scale * left * right^T, or the zero matrix when `zero` is set.
struct RankOneAtom {
  double scale = 0.0;
  Vector left;
  Vector right;
  bool zero = false;
};

// Any feasible point; lets custom oracles return non-extreme answers.
struct PointAtom {
  Vector point;
};

using Atom = std::variant<BasisAtom, RankOneAtom, PointAtom>;

struct OracleAnswer {
  Atom atom;
  double inner = 0.0;           // <G, atom>
  double tolerance_used = 0.0;  // xi handed to the spectral solver
  // lambda or sigma reported by the spectral solver (NaN for l1).
  double spectral_value = std::numeric_limits<double>::quiet_NaN();
  std::size_t spectral_iterations = 0;
};

Vector atom_to_point(const Atom& atom, Shape shape);
// <G, atom> recomputed from scratch.
double atom_inner(const Gradient& g, const Atom& atom);
// x <- (1 - gamma) x + gamma * atom
void blend_atom(Vector& x, double gamma, const Atom& atom, Shape shape);
std::string describe(const Atom& atom);

// -alpha sign(g_i) e_i at the smallest index maximizing |g_i|; sign(0) = +1.
OracleAnswer lmo_l1(const Vector& g, double alpha);

// -alpha u v^T from top_singular_pair at tolerance xi. A zero query returns a
// valid unit pair with inner = 0.
OracleAnswer lmo_nuclear(const LinearOperator& g, double alpha, double xi,
                         std::uint64_t seed);
OracleAnswer lmo_nuclear(const DenseMatrix& g, double alpha, double xi,
                         std::uint64_t seed);
OracleAnswer lmo_nuclear(const SparseEntries& g, double alpha, double xi,
                         std::uint64_t seed);

// Zero atom when the approximate smallest eigenvalue is >= 0, else
// alpha v v^T. Non-symmetric input (relative asymmetry > 1e-10) is an
// InputError.
OracleAnswer lmo_psd_nuclear(const LinearOperator& g, double alpha, double xi,
                             std::uint64_t seed);
OracleAnswer lmo_psd_nuclear(const DenseMatrix& g, double alpha, double xi,
                             std::uint64_t seed);
OracleAnswer lmo_psd_nuclear(const SparseEntries& g, double alpha, double xi,
                             std::uint64_t seed);

// Per-call tolerances. `eps` is the additive suboptimality budget; `xi` the
// relative residual handed to the spectral solver.
struct OracleRequest {
  double eps = 0.0;
  double xi = 0.0;
  std::uint64_t seed = 0;
};

OracleAnswer solve_lmo(const Domain& domain, const Gradient& g,
                       const OracleRequest& request);

using Oracle = std::function<OracleAnswer(const Domain&, const Gradient&,
                                          const OracleRequest&)>;

// min over the domain of <G, v>, at reference (machine-precision) tolerance.
double exact_linear_minimum(const Domain& domain, const Gradient& g,
                            std::uint64_t seed);

// answer.inner - exact minimum.
double oracle_suboptimality(const Domain& domain, const Gradient& g,
                            const OracleAnswer& answer, std::uint64_t seed);
inline double oracle_suboptimality(const OracleAnswer& answer,
                                   double exact_minimum) {
  return answer.inner - exact_minimum;
}

// Relative residual xi guaranteeing a suboptimality of at most `eps` under the
// residual model eps <= xi * alpha * ||G||; ||G|| is bounded by ||G||_F.
double xi_for_suboptimality(double eps, double alpha, const Gradient& g);

}  // namespace fws

#endif  // FWSCALE_LMO_HPP_
