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

// Iterative and small dense linear algebra kernels.
//
// extreme_eigenpair / top_singular_pair run symmetric Lanczos with full
// reorthogonalization from a seeded random unit start vector. Convergence is
// declared when the true residual satisfies
//
//     ||A v - lambda v|| <= xi * ||A||_est
//
// where ||A||_est is the largest-magnitude Ritz value seen so far. Requested
// tolerances below kResidualFloor are raised to it: residuals smaller than a
// few ulps of ||A|| cannot be certified in double precision.
//
// thin_qr, truncated_svd and pinv_solve are Householder / one-sided Jacobi
// routines for the small dense matrices that show up in sketch reconstruction.

#ifndef FWSCALE_SPECTRAL_HPP_
#define FWSCALE_SPECTRAL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>

#include "fwscale/types.hpp"

namespace fws {

inline constexpr double kResidualFloor = 1e-14;

// Tolerance used wherever a "machine precision" reference answer is needed.
inline constexpr double kReferenceTolerance = 1e-14;
// Krylov dimension built before the first convergence test (ARPACK's default
// ncv for one wanted eigenvalue), capped by the operator size.
inline constexpr std::size_t kMinKrylovDim = 20;

struct LinearOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool symmetric = false;
  // y is resized by the callee.
  std::function<void(const Vector& x, Vector& y)> matvec;
  std::function<void(const Vector& x, Vector& y)> rmatvec;

  Vector apply(const Vector& x) const {
    Vector y;
    matvec(x, y);
    return y;
  }
  Vector apply_transpose(const Vector& x) const {
    Vector y;
    rmatvec(x, y);
    return y;
  }

  static LinearOperator from_dense(std::shared_ptr<const DenseMatrix> m,
                                   bool symmetric = false);
  static LinearOperator from_dense(const DenseMatrix& m,
                                   bool symmetric = false);
  static LinearOperator from_sparse(std::shared_ptr<const SparseEntries> s);
  static LinearOperator from_sparse(const SparseEntries& s);
};

// x -> -A x. Shares the wrapped operator.
LinearOperator negated(const LinearOperator& a);

enum class Which { kSmallest, kLargest };

struct SpectralResult {
  double value = 0.0;  // lambda (eigen) or sigma (singular)
  Vector left;         // u; equals `right` for eigenpairs
  Vector right;        // v
  double residual = 0.0;          // ||A right - value left||
  double adjoint_residual = 0.0;  // ||A^T left - value right|| (singular only)
  double norm_estimate = 0.0;     // ||A||_est used in the stopping test
  double tolerance = 0.0;         // effective xi after flooring
  std::size_t iterations = 0;
};

// Default Lanczos budget for an operator of the given dimensions.
std::size_t default_max_iter(std::size_t rows, std::size_t cols);

// Pass max_iter = 0 for default_max_iter. Throws ConvergenceError when the
// residual test is not met within max_iter steps.
SpectralResult extreme_eigenpair(const LinearOperator& a, Which which,
                                 double xi, std::uint64_t seed,
                                 std::size_t max_iter = 0);

// Largest singular triple via Lanczos on A^T A (or A A^T when A is wide).
// Returned pair satisfies u^T A v = sigma >= 0.
SpectralResult top_singular_pair(const LinearOperator& a, double xi,
                                 std::uint64_t seed, std::size_t max_iter = 0);

// Spectral norm of a symmetric operator, max(|lambda_max|, |lambda_min|).
double symmetric_spectral_norm(const LinearOperator& a, std::uint64_t seed,
                               double xi = 1e-10);

struct QrFactors {
  DenseMatrix q;  // rows x cols, orthonormal columns
  DenseMatrix r;  // cols x cols, upper triangular with r(i,i) >= 0
};

// Householder QR without pivoting; requires rows >= cols. Rank deficient input
// yields (near) zero diagonal entries in R.
QrFactors thin_qr(const DenseMatrix& m);

struct SvdFactors {
  DenseMatrix u;  // rows x k
  Vector sigma;   // k, nonincreasing, strictly positive
  DenseMatrix v;  // cols x k

  DenseMatrix reconstruct() const;
  std::size_t rank() const { return static_cast<std::size_t>(sigma.size()); }
};

// Best rank-min(r, numerical rank) approximation via one-sided Jacobi.
// Singular values at or below max(rows, cols) * eps * sigma_max are dropped.
SvdFactors truncated_svd(const DenseMatrix& m, std::size_t r);

// All singular values (including zeros), nonincreasing.
Vector singular_values(const DenseMatrix& m);

// argmin_X ||A X - B||_F through Householder QR. Throws ConditioningError
// when min |R_ii| <= 1e-12 * max |R_ii|.
DenseMatrix pinv_solve(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace fws

#endif  // FWSCALE_SPECTRAL_HPP_
