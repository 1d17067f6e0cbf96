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

#include "fwscale/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "fwscale/errors.hpp"

namespace fws {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxBasis = 512;

// ---------------------------------------------------------------------------
// Symmetric tridiagonal helpers. a: diagonal (k), b: off-diagonal (k-1).

// Number of eigenvalues strictly below x (Sturm sequence).
std::size_t sturm_count(const std::vector<double>& a,
                        const std::vector<double>& b, double x,
                        double pivmin) {
  std::size_t count = 0;
  double d = a[0] - x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    d = a[i] - x - b[i - 1] * b[i - 1] / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

// Extreme eigenvalue of the tridiagonal matrix by bisection.
double tridiagonal_extreme(const std::vector<double>& a,
                           const std::vector<double>& b, bool largest) {
  const std::size_t k = a.size();
  if (k == 1) return a[0];
  double lo = a[0], hi = a[0], scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) +
                     (i + 1 < k ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
    scale = std::max(scale, std::abs(a[i]) + r);
  }
  const double pivmin = std::max(std::numeric_limits<double>::min(),
                                 kEps * kEps * scale * scale);
  lo -= 2 * kEps * scale;
  hi += 2 * kEps * scale;
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    const std::size_t c = sturm_count(a, b, mid, pivmin);
    if (largest ? c == k : c >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvector of T for eigenvalue theta by inverse iteration, using a
// tridiagonal LU factorization with partial pivoting of T - theta I.
std::vector<double> tridiagonal_eigenvector(const std::vector<double>& a,
                                            const std::vector<double>& b,
                                            double theta) {
  const std::size_t k = a.size();
  if (k == 1) return {1.0};
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    scale = std::max(scale, std::abs(a[i] - theta) +
                                (i + 1 < k ? std::abs(b[i]) : 0.0) +
                                (i > 0 ? std::abs(b[i - 1]) : 0.0));
  const double tiny = std::max(kEps * scale, std::numeric_limits<double>::min());

  std::vector<double> dl(b), d(k), du(b), du2(k > 2 ? k - 2 : 0, 0.0);
  std::vector<bool> swapped(k - 1, false);
  for (std::size_t i = 0; i < k; ++i) d[i] = a[i] - theta;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < k) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  for (auto& p : d)
    if (std::abs(p) < tiny) p = std::copysign(tiny, p == 0.0 ? 1.0 : p);

  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i)
    x[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);  // avoid special symmetry
  for (int iter = 0; iter < 3; ++iter) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (!swapped[i]) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        const double temp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = temp - dl[i] * x[i];
      }
    }
    x[k - 1] /= d[k - 1];
    x[k - 2] = (x[k - 2] - du[k - 2] * x[k - 1]) / d[k - 2];
    for (std::size_t i = k - 2; i-- > 0;)
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  return x;
}

// Flip so that the largest-magnitude component is positive.
void fix_sign(Vector& v) {
  if (v.size() == 0) return;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
}

struct Verdict {
  bool accepted = false;
  double relative_residual = std::numeric_limits<double>::infinity();
};

// Decides whether a Ritz pair of the (symmetric) Lanczos operator satisfies
// the caller's residual contract; fills `out` on success.
using Acceptor = std::function<Verdict(const Vector& y, double theta,
                                       double norm_est, SpectralResult& out)>;

// Lanczos for the largest eigenvalue with full (CGS2) reorthogonalization.
// Restarts from the current Ritz vector when the basis is exhausted.
SpectralResult lanczos_largest(const LinearOperator& op, double tol,
                               std::uint64_t seed, std::size_t max_iter,
                               const Acceptor& accept) {
  const std::size_t n = op.rows;
  const std::size_t cap = std::min(n, kMaxBasis);
  Rng rng(seed);
  Vector start = gaussian_vector(n, rng);
  start.normalize();

  DenseMatrix q(n, cap);
  std::vector<double> alpha, beta;
  double norm_est = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t total = 0;
  Vector w, y;
  SpectralResult out;

  auto random_orthogonal = [&](std::size_t cols) -> Vector {
    Vector r = gaussian_vector(n, rng);
    for (int pass = 0; pass < 2; ++pass)
      r -= q.leftCols(cols) * (q.leftCols(cols).transpose() * r);
    const double nr = r.norm();
    if (nr <= 1e-8) return Vector();
    return r / nr;
  };

  while (true) {
    q.col(0) = start;
    alpha.clear();
    beta.clear();
    std::size_t j = 0;
    while (true) {
      if (total >= max_iter) {
        throw ConvergenceError(
            "Lanczos did not converge in " + std::to_string(max_iter) +
                " steps (best relative residual " + std::to_string(best) + ")",
            best);
      }
      op.matvec(q.col(j), w);
      ++total;
      const double aj = q.col(j).dot(w);
      w -= aj * q.col(j);
      if (j > 0) w -= beta[j - 1] * q.col(j - 1);
      for (int pass = 0; pass < 2; ++pass)
        w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
      const double bj = w.norm();
      alpha.push_back(aj);

      const double theta = tridiagonal_extreme(alpha, beta, true);
      const double theta_min = tridiagonal_extreme(alpha, beta, false);
      norm_est = std::max({norm_est, std::abs(theta), std::abs(theta_min)});
      const std::vector<double> s = tridiagonal_eigenvector(alpha, beta, theta);
      const double estimate = bj * std::abs(s.back());

      const bool breakdown = bj <= 8 * kEps * std::max(norm_est, std::abs(aj));
      const bool full = j + 1 == cap;
      const bool warm = j + 1 >= std::min(cap, kMinKrylovDim);
      bool have_y = false;
      if ((warm && estimate <= 10.0 * tol * norm_est) || breakdown || full) {
        y = q.leftCols(j + 1) *
            Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(j + 1));
        y.normalize();
        have_y = true;
        const Verdict v = accept(y, theta, norm_est, out);
        best = std::min(best, v.relative_residual);
        if (v.accepted) {
          out.iterations = total;
          out.norm_estimate = norm_est;
          out.tolerance = tol;
          return out;
        }
      }
      if (full) {
        start = y;
        break;
      }
      if (breakdown) {
        Vector r = random_orthogonal(j + 1);
        if (r.size() == 0) {
          if (!have_y) break;
          start = y;
          break;
        }
        beta.push_back(0.0);
        q.col(j + 1) = r;
      } else {
        beta.push_back(bj);
        q.col(j + 1) = w / bj;
      }
      ++j;
    }
  }
}

void check_operator(const LinearOperator& a) {
  if (a.rows == 0 || a.cols == 0)
    throw ParameterError("spectral solver: empty operator");
  if (!a.matvec) throw ParameterError("spectral solver: operator has no matvec");
}

double effective_tolerance(double xi) {
  if (!(xi > 0.0) || std::isnan(xi))
    throw ParameterError("spectral tolerance xi must be positive");
  return std::max(xi, kResidualFloor);
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator LinearOperator::from_dense(std::shared_ptr<const DenseMatrix> m,
                                          bool symmetric) {
  LinearOperator op;
  op.rows = static_cast<std::size_t>(m->rows());
  op.cols = static_cast<std::size_t>(m->cols());
  op.symmetric = symmetric;
  op.matvec = [m](const Vector& x, Vector& y) { y.noalias() = *m * x; };
  op.rmatvec = [m](const Vector& x, Vector& y) {
    y.noalias() = m->transpose() * x;
  };
  return op;
}

LinearOperator LinearOperator::from_dense(const DenseMatrix& m,
                                          bool symmetric) {
  return from_dense(std::make_shared<const DenseMatrix>(m), symmetric);
}

LinearOperator LinearOperator::from_sparse(
    std::shared_ptr<const SparseEntries> s) {
  LinearOperator op;
  op.rows = s->rows;
  op.cols = s->cols;
  op.symmetric = s->symmetric;
  op.matvec = [s](const Vector& x, Vector& y) { s->matvec(x, y); };
  op.rmatvec = [s](const Vector& x, Vector& y) { s->rmatvec(x, y); };
  return op;
}

LinearOperator LinearOperator::from_sparse(const SparseEntries& s) {
  return from_sparse(std::make_shared<const SparseEntries>(s));
}

LinearOperator negated(const LinearOperator& a) {
  LinearOperator op = a;
  auto mv = a.matvec;
  auto rmv = a.rmatvec;
  op.matvec = [mv](const Vector& x, Vector& y) {
    mv(x, y);
    y = -y;
  };
  if (rmv)
    op.rmatvec = [rmv](const Vector& x, Vector& y) {
      rmv(x, y);
      y = -y;
    };
  return op;
}

// ---------------------------------------------------------------------------
// Lanczos drivers

std::size_t default_max_iter(std::size_t rows, std::size_t cols) {
  return 10 * std::min(rows, cols) + 50;
}

SpectralResult extreme_eigenpair(const LinearOperator& a, Which which,
                                 double xi, std::uint64_t seed,
                                 std::size_t max_iter) {
  check_operator(a);
  if (!a.symmetric || a.rows != a.cols)
    throw InputError("extreme_eigenpair needs a symmetric operator");
  if (which == Which::kSmallest) {
    SpectralResult r =
        extreme_eigenpair(negated(a), Which::kLargest, xi, seed, max_iter);
    r.value = -r.value;
    return r;
  }
  const double tol = effective_tolerance(xi);
  if (max_iter == 0) max_iter = default_max_iter(a.rows, a.cols);

  Vector ay;
  Acceptor accept = [&](const Vector& y, double, double norm_est,
                        SpectralResult& out) {
    Vector v = y;
    fix_sign(v);
    a.matvec(v, ay);
    const double lambda = v.dot(ay);
    const double res = (ay - lambda * v).norm();
    Verdict verdict;
    verdict.relative_residual = norm_est > 0 ? res / norm_est : res;
    verdict.accepted = res <= tol * norm_est;
    if (verdict.accepted) {
      out.value = lambda;
      out.left = v;
      out.right = v;
      out.residual = res;
    }
    return verdict;
  };
  return lanczos_largest(a, tol, seed, max_iter, accept);
}

SpectralResult top_singular_pair(const LinearOperator& a, double xi,
                                 std::uint64_t seed, std::size_t max_iter) {
  check_operator(a);
  if (!a.rmatvec)
    throw ParameterError("top_singular_pair needs the adjoint product");
  const double tol = effective_tolerance(xi);
  if (max_iter == 0) max_iter = default_max_iter(a.rows, a.cols);
  const bool tall = a.rows >= a.cols;

  // Gram operator: A^T A for tall A, A A^T for wide A.
  LinearOperator gram;
  gram.rows = gram.cols = tall ? a.cols : a.rows;
  gram.symmetric = true;
  Vector tmp;
  if (tall) {
    gram.matvec = [&a, &tmp](const Vector& x, Vector& y) {
      a.matvec(x, tmp);
      a.rmatvec(tmp, y);
    };
  } else {
    gram.matvec = [&a, &tmp](const Vector& x, Vector& y) {
      a.rmatvec(x, tmp);
      a.matvec(tmp, y);
    };
  }

  Vector img, back;
  Acceptor accept = [&](const Vector& y, double, double norm_est,
                        SpectralResult& out) {
    Vector base = y;
    fix_sign(base);
    const double sigma_est = std::sqrt(std::max(norm_est, 0.0));
    Verdict verdict;
    // tall: base = v, img = A v. wide: base = u, img = A^T u.
    if (tall)
      a.matvec(base, img);
    else
      a.rmatvec(base, img);
    const double sigma = img.norm();
    if (sigma_est == 0.0) {
      // Zero operator: any unit pair is a singular pair.
      Vector other = Vector::Zero(tall ? a.rows : a.cols);
      other(0) = 1.0;
      out.value = 0.0;
      out.left = tall ? other : base;
      out.right = tall ? base : other;
      out.residual = out.adjoint_residual = 0.0;
      verdict.accepted = true;
      verdict.relative_residual = 0.0;
      return verdict;
    }
    if (sigma == 0.0) return verdict;
    Vector other = img / sigma;
    Vector& u = tall ? other : base;
    Vector& v = tall ? base : other;
    a.matvec(v, back);
    const double res = (back - sigma * u).norm();
    a.rmatvec(u, back);
    const double adj = (back - sigma * v).norm();
    verdict.relative_residual = std::max(res, adj) / sigma_est;
    verdict.accepted = std::max(res, adj) <= tol * sigma_est;
    if (verdict.accepted) {
      out.value = sigma;
      out.left = u;
      out.right = v;
      out.residual = res;
      out.adjoint_residual = adj;
    }
    return verdict;
  };
  SpectralResult r = lanczos_largest(gram, tol, seed, max_iter, accept);
  r.norm_estimate = std::sqrt(std::max(r.norm_estimate, 0.0));
  return r;
}

double symmetric_spectral_norm(const LinearOperator& a, std::uint64_t seed,
                               double xi) {
  const double hi =
      extreme_eigenpair(a, Which::kLargest, xi, derive_seed(seed, 1)).value;
  const double lo =
      extreme_eigenpair(a, Which::kSmallest, xi, derive_seed(seed, 2)).value;
  return std::max(std::abs(hi), std::abs(lo));
}

// ---------------------------------------------------------------------------
// Dense kernels

QrFactors thin_qr(const DenseMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (rows < cols) throw ParameterError("thin_qr requires rows >= cols");
  DenseMatrix r = m;
  std::vector<Vector> reflectors(cols);
  std::vector<double> taus(cols, 0.0);
  for (Eigen::Index k = 0; k < cols; ++k) {
    Vector x = r.block(k, k, rows - k, 1);
    const double nx = x.norm();
    if (nx == 0.0) continue;
    const double alpha = x(0) >= 0 ? -nx : nx;
    x(0) -= alpha;
    const double nv = x.squaredNorm();
    if (nv == 0.0) continue;
    reflectors[k] = x;
    taus[k] = 2.0 / nv;
    r.block(k, k, rows - k, cols - k) -=
        (taus[k] * x) * (x.transpose() * r.block(k, k, rows - k, cols - k));
  }
  DenseMatrix q = DenseMatrix::Identity(rows, cols);
  for (Eigen::Index k = cols; k-- > 0;) {
    if (taus[k] == 0.0) continue;
    const Vector& v = reflectors[k];
    q.block(k, 0, rows - k, cols) -=
        (taus[k] * v) * (v.transpose() * q.block(k, 0, rows - k, cols));
  }
  QrFactors f;
  f.r = r.topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < cols; ++i) {
    if (f.r(i, i) < 0) {
      f.r.row(i) = -f.r.row(i);
      q.col(i) = -q.col(i);
    }
  }
  f.q = std::move(q);
  return f;
}

namespace {

// One-sided Jacobi on a tall matrix (rows >= cols). Returns all singular
// triples sorted by decreasing sigma.
SvdFactors jacobi_svd_tall(const DenseMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::Identity(cols, cols);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < cols; ++p) {
      for (Eigen::Index qq = p + 1; qq < cols; ++qq) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(qq).squaredNorm();
        const double gamma = a.col(p).dot(a.col(qq));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, qq);
          a(i, p) = c * ap - s * aq;
          a(i, qq) = s * ap + c * aq;
        }
        for (Eigen::Index i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, qq);
          v(i, p) = c * vp - s * vq;
          v(i, qq) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  Vector sigma = a.colwise().norm().transpose();
  std::vector<Eigen::Index> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) {
                     return sigma(x) > sigma(y);
                   });
  SvdFactors f;
  f.u.resize(rows, cols);
  f.v.resize(cols, cols);
  f.sigma.resize(cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Eigen::Index c = order[k];
    f.sigma(k) = sigma(c);
    f.v.col(k) = v.col(c);
    if (sigma(c) > 0)
      f.u.col(k) = a.col(c) / sigma(c);
    else
      f.u.col(k).setZero();
  }
  return f;
}

SvdFactors jacobi_svd(const DenseMatrix& m) {
  if (m.rows() >= m.cols()) return jacobi_svd_tall(m);
  SvdFactors t = jacobi_svd_tall(m.transpose());
  std::swap(t.u, t.v);
  return t;
}

}  // namespace

DenseMatrix SvdFactors::reconstruct() const {
  return u * sigma.asDiagonal() * v.transpose();
}

SvdFactors truncated_svd(const DenseMatrix& m, std::size_t r) {
  if (r < 1) throw ParameterError("truncated_svd needs r >= 1");
  if (m.size() == 0) throw ParameterError("truncated_svd of an empty matrix");
  SvdFactors full = jacobi_svd(m);
  const double smax = full.sigma.size() ? full.sigma(0) : 0.0;
  const double cut = static_cast<double>(std::max(m.rows(), m.cols())) * kEps *
                     smax;
  Eigen::Index keep = 0;
  while (keep < full.sigma.size() && keep < static_cast<Eigen::Index>(r) &&
         full.sigma(keep) > cut)
    ++keep;
  SvdFactors out;
  out.u = full.u.leftCols(keep);
  out.sigma = full.sigma.head(keep);
  out.v = full.v.leftCols(keep);
  return out;
}

Vector singular_values(const DenseMatrix& m) {
  if (m.size() == 0) return Vector();
  return jacobi_svd(m).sigma;
}

DenseMatrix pinv_solve(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows())
    throw InputError("pinv_solve: row counts of A and B differ");
  if (a.rows() < a.cols())
    throw ConditioningError("pinv_solve: A has more columns than rows");
  const QrFactors f = thin_qr(a);
  const Vector diag = f.r.diagonal().cwiseAbs();
  if (diag.size() == 0) return DenseMatrix::Zero(0, b.cols());
  if (!(diag.minCoeff() > 1e-12 * diag.maxCoeff()))
    throw ConditioningError("pinv_solve: A is numerically rank deficient");
  DenseMatrix x = f.q.transpose() * b;
  f.r.triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

}  // namespace fws
