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

#include "fwscale/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "fwscale/errors.hpp"

namespace fws {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ParameterError("domain radius alpha must be positive and finite");
}

void check_xi(double xi) {
  if (!(xi >= 0.0)) throw ParameterError("oracle tolerance xi must be >= 0");
}

double oracle_tolerance(double xi) { return std::max(xi, kResidualFloor); }

Eigen::Map<const DenseMatrix> as_matrix(const Vector& x, Shape shape) {
  return {x.data(), static_cast<Eigen::Index>(shape.rows),
          static_cast<Eigen::Index>(shape.cols)};
}

// Relative asymmetry of an operator from one random probe pair.
double probe_asymmetry(const LinearOperator& g, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xa5));
  const Vector x = gaussian_vector(g.rows, rng);
  const Vector y = gaussian_vector(g.rows, rng);
  const Vector gx = g.apply(x), gy = g.apply(y);
  const double scale = std::max(gx.norm() * y.norm(), gy.norm() * x.norm());
  if (scale == 0.0) return 0.0;
  return std::abs(gx.dot(y) - x.dot(gy)) / scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::l1(std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw ParameterError("l1 domain needs a positive dimension");
  return {DomainKind::kL1, alpha, {n, 1}};
}

Domain Domain::nuclear(std::size_t rows, std::size_t cols, double alpha) {
  check_alpha(alpha);
  if (rows == 0 || cols == 0)
    throw ParameterError("nuclear domain needs positive dimensions");
  return {DomainKind::kNuclear, alpha, {rows, cols}};
}

Domain Domain::psd_nuclear(std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw ParameterError("psd domain needs a positive dimension");
  return {DomainKind::kPsdNuclear, alpha, {n, n}};
}

double Domain::diameter() const {
  switch (kind) {
    case DomainKind::kL1:
    case DomainKind::kNuclear:
      return 2.0 * radius;
    case DomainKind::kPsdNuclear:
      return shape.rows > 1 ? std::sqrt(2.0) * radius : radius;
  }
  return 2.0 * radius;
}

double Domain::gauge(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != shape.size())
    throw InputError("point does not match the domain shape");
  if (!x.allFinite()) throw InputError("point is not finite");
  if (kind == DomainKind::kL1) return x.lpNorm<1>();
  const auto m = as_matrix(x, shape);
  const double nuc = nuclear_norm(m);
  if (kind == DomainKind::kNuclear) return nuc;
  const double amax = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * amax)
    throw InputError("point in the psd domain is not symmetric");
  const double tr = m.trace();
  if (nuc - tr > 1e-9 * std::max(nuc, amax))
    throw InputError("point in the psd domain is indefinite");
  return tr;
}

bool Domain::contains(const Vector& x, double rel_tol) const {
  try {
    return gauge(x) <= radius * (1.0 + rel_tol);
  } catch (const InputError&) {
    return false;
  }
}

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kL1:
      return "l1";
    case DomainKind::kNuclear:
      return "nuclear";
    case DomainKind::kPsdNuclear:
      return "psd_nuclear";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Atoms

Vector atom_to_point(const Atom& atom, Shape shape) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(shape.size()));
  blend_atom(x, 1.0, atom, shape);
  return x;
}

double atom_inner(const Gradient& g, const Atom& atom) {
  if (const auto* b = std::get_if<BasisAtom>(&atom)) {
    if (b->index >= g.shape().size()) throw InputError("basis atom out of range");
    if (!g.is_sampled()) return g.coeffs()(b->index) * b->value;
    const auto& s = *g.sampling();
    const auto e = s.find(b->index % s.rows(), b->index / s.rows());
    return e ? g.coeffs()(*e) * b->value : 0.0;
  }
  if (const auto* r = std::get_if<RankOneAtom>(&atom)) {
    if (r->zero || r->scale == 0.0) return 0.0;
    if (!g.is_sampled())
      return r->scale *
             r->left.dot(as_matrix(g.coeffs(), g.shape()) * r->right);
    const auto& s = *g.sampling();
    double acc = 0.0;
    for (std::size_t e = 0; e < s.num_measurements(); ++e)
      acc += g.coeffs()(e) * r->left(s.row(e)) * r->right(s.col(e));
    return r->scale * acc;
  }
  return g.dot(std::get<PointAtom>(atom).point);
}

void blend_atom(Vector& x, double gamma, const Atom& atom, Shape shape) {
  if (static_cast<std::size_t>(x.size()) != shape.size())
    throw InputError("blend_atom: point does not match the shape");
  x *= (1.0 - gamma);
  if (const auto* b = std::get_if<BasisAtom>(&atom)) {
    x(b->index) += gamma * b->value;
  } else if (const auto* r = std::get_if<RankOneAtom>(&atom)) {
    if (r->zero || r->scale == 0.0) return;
    Eigen::Map<DenseMatrix> m(x.data(), shape.rows, shape.cols);
    m.noalias() += (gamma * r->scale) * r->left * r->right.transpose();
  } else {
    x += gamma * std::get<PointAtom>(atom).point;
  }
}

std::string describe(const Atom& atom) {
  char buf[96];
  if (const auto* b = std::get_if<BasisAtom>(&atom)) {
    std::snprintf(buf, sizeof buf, "basis[%zu]=%.6g", b->index, b->value);
  } else if (const auto* r = std::get_if<RankOneAtom>(&atom)) {
    if (r->zero)
      std::snprintf(buf, sizeof buf, "zero");
    else
      std::snprintf(buf, sizeof buf, "rank1(%.6g)", r->scale);
  } else {
    std::snprintf(buf, sizeof buf, "point");
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Oracles

OracleAnswer lmo_l1(const Vector& g, double alpha) {
  check_alpha(alpha);
  if (g.size() == 0) throw InputError("l1 oracle: empty gradient");
  if (!g.allFinite()) throw InputError("l1 oracle: gradient is not finite");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < g.size(); ++i)
    if (std::abs(g(i)) > std::abs(g(best))) best = i;
  const double value = g(best) >= 0.0 ? -alpha : alpha;
  OracleAnswer a;
  a.atom = BasisAtom{static_cast<std::size_t>(best), value};
  a.inner = value * g(best);
  a.tolerance_used = 0.0;
  return a;
}

OracleAnswer lmo_nuclear(const LinearOperator& g, double alpha, double xi,
                         std::uint64_t seed) {
  check_alpha(alpha);
  check_xi(xi);
  const SpectralResult r = top_singular_pair(g, oracle_tolerance(xi), seed);
  OracleAnswer a;
  a.atom = RankOneAtom{-alpha, r.left, r.right, false};
  a.inner = r.value == 0.0 ? 0.0 : -alpha * r.left.dot(g.apply(r.right));
  a.tolerance_used = r.tolerance;
  a.spectral_value = r.value;
  a.spectral_iterations = r.iterations;
  return a;
}

OracleAnswer lmo_nuclear(const DenseMatrix& g, double alpha, double xi,
                         std::uint64_t seed) {
  if (!g.allFinite()) throw InputError("nuclear oracle: gradient is not finite");
  return lmo_nuclear(LinearOperator::from_dense(g), alpha, xi, seed);
}

OracleAnswer lmo_nuclear(const SparseEntries& g, double alpha, double xi,
                         std::uint64_t seed) {
  g.validate();
  return lmo_nuclear(LinearOperator::from_sparse(g), alpha, xi, seed);
}

OracleAnswer lmo_psd_nuclear(const LinearOperator& g, double alpha, double xi,
                             std::uint64_t seed) {
  check_alpha(alpha);
  check_xi(xi);
  if (g.rows != g.cols) throw InputError("psd oracle: gradient is not square");
  if (!g.symmetric && probe_asymmetry(g, seed) > 1e-10)
    throw InputError("psd oracle: gradient is not symmetric");
  LinearOperator sym = g;
  sym.symmetric = true;
  const SpectralResult r = extreme_eigenpair(sym, Which::kSmallest,
                                             oracle_tolerance(xi), seed);
  OracleAnswer a;
  if (r.value >= 0.0) {
    a.atom = RankOneAtom{0.0, r.left, r.right, true};
    a.inner = 0.0;
  } else {
    a.atom = RankOneAtom{alpha, r.left, r.right, false};
    a.inner = alpha * r.value;
  }
  a.tolerance_used = r.tolerance;
  a.spectral_value = r.value;
  a.spectral_iterations = r.iterations;
  return a;
}

OracleAnswer lmo_psd_nuclear(const DenseMatrix& g, double alpha, double xi,
                             std::uint64_t seed) {
  if (!g.allFinite()) throw InputError("psd oracle: gradient is not finite");
  if (g.rows() != g.cols()) throw InputError("psd oracle: gradient is not square");
  const double amax = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * amax)
    throw InputError("psd oracle: gradient is not symmetric");
  return lmo_psd_nuclear(LinearOperator::from_dense(g, true), alpha, xi, seed);
}

OracleAnswer lmo_psd_nuclear(const SparseEntries& g, double alpha, double xi,
                             std::uint64_t seed) {
  SparseEntries copy = g;
  copy.validate();
  if (copy.rows != copy.cols)
    throw InputError("psd oracle: gradient is not square");
  // Symmetry up to 1e-10 relative: dense comparison is fine at oracle scale.
  const DenseMatrix d = copy.to_dense();
  const double amax = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-10 * amax)
    throw InputError("psd oracle: gradient is not symmetric");
  auto shared = std::make_shared<const SparseEntries>(std::move(copy));
  LinearOperator op = LinearOperator::from_sparse(shared);
  op.symmetric = true;
  return lmo_psd_nuclear(op, alpha, xi, seed);
}

OracleAnswer solve_lmo(const Domain& domain, const Gradient& g,
                       const OracleRequest& request) {
  if (!(g.shape() == domain.shape))
    throw InputError("gradient does not match the domain shape");
  if (!g.all_finite()) throw InputError("gradient is not finite");
  switch (domain.kind) {
    case DomainKind::kL1: {
      if (!g.is_sampled()) return lmo_l1(g.coeffs(), domain.radius);
      const DenseMatrix d = g.to_dense();
      return lmo_l1(Eigen::Map<const Vector>(d.data(), d.size()),
                    domain.radius);
    }
    case DomainKind::kNuclear:
      return lmo_nuclear(g.as_operator(), domain.radius, request.xi,
                         request.seed);
    case DomainKind::kPsdNuclear: {
      LinearOperator op = g.as_operator();
      return lmo_psd_nuclear(op, domain.radius, request.xi, request.seed);
    }
  }
  throw ParameterError("unknown domain kind");
}

double exact_linear_minimum(const Domain& domain, const Gradient& g,
                            std::uint64_t seed) {
  switch (domain.kind) {
    case DomainKind::kL1:
      return -domain.radius * g.coeffs().lpNorm<Eigen::Infinity>();
    case DomainKind::kNuclear:
      return -domain.radius *
             top_singular_pair(g.as_operator(), kReferenceTolerance, seed)
                 .value;
    case DomainKind::kPsdNuclear: {
      LinearOperator op = g.as_operator();
      op.symmetric = true;
      const double lambda =
          extreme_eigenpair(op, Which::kSmallest, kReferenceTolerance, seed)
              .value;
      return domain.radius * std::min(lambda, 0.0);
    }
  }
  throw ParameterError("unknown domain kind");
}

double oracle_suboptimality(const Domain& domain, const Gradient& g,
                            const OracleAnswer& answer, std::uint64_t seed) {
  return answer.inner - exact_linear_minimum(domain, g, seed);
}

double xi_for_suboptimality(double eps, double alpha, const Gradient& g) {
  if (!(eps > 0.0)) return 0.0;
  const double scale = alpha * g.frobenius_norm();
  if (scale == 0.0) return 1.0;
  return std::min(1.0, eps / scale);
}

}  // namespace fws
