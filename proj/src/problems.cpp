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

#include "fwscale/problems.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fwscale/errors.hpp"

namespace fws {

namespace {

std::string idx(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + " is not finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// SparseEntries

void SparseEntries::validate() const {
  std::vector<std::size_t> keys;
  keys.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.i >= rows || e.j >= cols)
      throw InputError("sparse entry " + idx(e.i, e.j) + " out of bounds");
    if (!std::isfinite(e.value))
      throw InputError("sparse entry " + idx(e.i, e.j) + " is not finite");
    keys.push_back(e.i + rows * e.j);
  }
  std::vector<std::size_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("duplicate sparse entry");
  if (!symmetric) return;
  if (rows != cols) throw InputError("symmetric sparse matrix must be square");
  std::vector<std::pair<std::size_t, double>> by_key;
  by_key.reserve(entries.size());
  for (const auto& e : entries) by_key.emplace_back(e.i + rows * e.j, e.value);
  std::sort(by_key.begin(), by_key.end());
  for (const auto& e : entries) {
    const std::size_t mirror = e.j + rows * e.i;
    auto it = std::lower_bound(
        by_key.begin(), by_key.end(), mirror,
        [](const auto& p, std::size_t k) { return p.first < k; });
    if (it == by_key.end() || it->first != mirror || it->second != e.value)
      throw InputError("symmetric tag broken at " + idx(e.i, e.j));
  }
}

void SparseEntries::matvec(const Vector& x, Vector& y) const {
  y = Vector::Zero(static_cast<Eigen::Index>(rows));
  for (const auto& e : entries) y(e.i) += e.value * x(e.j);
}

void SparseEntries::rmatvec(const Vector& x, Vector& y) const {
  y = Vector::Zero(static_cast<Eigen::Index>(cols));
  for (const auto& e : entries) y(e.j) += e.value * x(e.i);
}

DenseMatrix SparseEntries::to_dense() const {
  DenseMatrix m = DenseMatrix::Zero(rows, cols);
  for (const auto& e : entries) m(e.i, e.j) += e.value;
  return m;
}

double SparseEntries::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.value * e.value;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// SamplingOperator

SamplingOperator::SamplingOperator(
    std::size_t rows, std::size_t cols,
    std::vector<std::pair<std::size_t, std::size_t>> entries, bool symmetric)
    : rows_(rows), cols_(cols), symmetric_(symmetric) {
  if (rows == 0 || cols == 0)
    throw ParameterError("sampling operator needs positive dimensions");
  for (const auto& [i, j] : entries)
    if (i >= rows || j >= cols)
      throw InputError("sampled entry " + idx(i, j) + " out of bounds");
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  if (std::adjacent_find(entries.begin(), entries.end()) != entries.end())
    throw InputError("duplicate sampled entry");
  row_.reserve(entries.size());
  col_.reserve(entries.size());
  for (const auto& [i, j] : entries) {
    row_.push_back(i);
    col_.push_back(j);
  }
  if (symmetric) {
    if (rows != cols) throw InputError("symmetric sampling must be square");
    for (std::size_t e = 0; e < row_.size(); ++e)
      if (!find(col_[e], row_[e]))
        throw InputError("symmetric sampling misses mirror of " +
                         idx(row_[e], col_[e]));
  }
}

std::optional<std::size_t> SamplingOperator::find(std::size_t i,
                                                  std::size_t j) const {
  std::size_t lo = 0, hi = row_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (col_[mid] < j || (col_[mid] == j && row_[mid] < i))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < row_.size() && row_[lo] == i && col_[lo] == j) return lo;
  return std::nullopt;
}

Vector SamplingOperator::apply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != rows_ * cols_)
    throw InputError("sampling operator: point size mismatch");
  Vector z(static_cast<Eigen::Index>(row_.size()));
  for (std::size_t e = 0; e < row_.size(); ++e) z(e) = x(flat_index(e));
  return z;
}

Vector SamplingOperator::apply(const DenseMatrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != rows_ ||
      static_cast<std::size_t>(x.cols()) != cols_)
    throw InputError("sampling operator: matrix shape mismatch");
  Vector z(static_cast<Eigen::Index>(row_.size()));
  for (std::size_t e = 0; e < row_.size(); ++e) z(e) = x(row_[e], col_[e]);
  return z;
}

SparseEntries SamplingOperator::adjoint(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != row_.size())
    throw InputError("sampling adjoint: measurement size mismatch");
  SparseEntries s;
  s.rows = rows_;
  s.cols = cols_;
  s.entries.reserve(row_.size());
  for (std::size_t e = 0; e < row_.size(); ++e)
    s.entries.push_back({row_[e], col_[e], y(e)});
  return s;
}

Vector SamplingOperator::apply_rank_one(double scale, const Vector& u,
                                        const Vector& v) const {
  if (static_cast<std::size_t>(u.size()) != rows_ ||
      static_cast<std::size_t>(v.size()) != cols_)
    throw InputError("sampling operator: rank-one factor size mismatch");
  Vector z(static_cast<Eigen::Index>(row_.size()));
  for (std::size_t e = 0; e < row_.size(); ++e)
    z(e) = scale * u(row_[e]) * v(col_[e]);
  return z;
}

void SamplingOperator::adjoint_matvec(const Vector& c, const Vector& x,
                                      Vector& y) const {
  y = Vector::Zero(static_cast<Eigen::Index>(rows_));
  for (std::size_t e = 0; e < row_.size(); ++e) y(row_[e]) += c(e) * x(col_[e]);
}

void SamplingOperator::adjoint_rmatvec(const Vector& c, const Vector& x,
                                       Vector& y) const {
  y = Vector::Zero(static_cast<Eigen::Index>(cols_));
  for (std::size_t e = 0; e < row_.size(); ++e) y(col_[e]) += c(e) * x(row_[e]);
}

// ---------------------------------------------------------------------------
// Gradient

Gradient Gradient::dense(Shape shape, Vector coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != shape.size())
    throw InputError("gradient size does not match its shape");
  Gradient g;
  g.shape_ = shape;
  g.coeffs_ = std::move(coeffs);
  return g;
}

Gradient Gradient::sampled(std::shared_ptr<const SamplingOperator> sampling,
                           Vector coeffs) {
  if (!sampling) throw InputError("sampled gradient needs a sampling operator");
  if (static_cast<std::size_t>(coeffs.size()) != sampling->num_measurements())
    throw InputError("sampled gradient size does not match the measurements");
  Gradient g;
  g.shape_ = sampling->shape();
  g.coeffs_ = std::move(coeffs);
  g.sampling_ = std::move(sampling);
  return g;
}

double Gradient::dot(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != shape_.size())
    throw InputError("gradient/point size mismatch");
  if (!sampling_) return coeffs_.dot(x);
  double s = 0.0;
  for (Eigen::Index e = 0; e < coeffs_.size(); ++e)
    s += coeffs_(e) * x(sampling_->flat_index(e));
  return s;
}

double Gradient::frobenius_norm() const { return coeffs_.norm(); }

bool Gradient::all_finite() const { return coeffs_.allFinite(); }

LinearOperator Gradient::as_operator() const {
  if (!sampling_) {
    auto m = std::make_shared<const DenseMatrix>(
        Eigen::Map<const DenseMatrix>(coeffs_.data(), shape_.rows,
                                      shape_.cols));
    return LinearOperator::from_dense(std::move(m));
  }
  LinearOperator op;
  op.rows = shape_.rows;
  op.cols = shape_.cols;
  auto c = std::make_shared<const Vector>(coeffs_);
  auto s = sampling_;
  op.matvec = [c, s](const Vector& x, Vector& y) { s->adjoint_matvec(*c, x, y); };
  op.rmatvec = [c, s](const Vector& x, Vector& y) {
    s->adjoint_rmatvec(*c, x, y);
  };
  return op;
}

DenseMatrix Gradient::to_dense() const {
  if (!sampling_)
    return Eigen::Map<const DenseMatrix>(coeffs_.data(), shape_.rows,
                                         shape_.cols);
  DenseMatrix m = DenseMatrix::Zero(shape_.rows, shape_.cols);
  for (Eigen::Index e = 0; e < coeffs_.size(); ++e)
    m(sampling_->row(e), sampling_->col(e)) = coeffs_(e);
  return m;
}

SparseEntries Gradient::to_sparse() const {
  if (sampling_) return sampling_->adjoint(coeffs_);
  SparseEntries s;
  s.rows = shape_.rows;
  s.cols = shape_.cols;
  for (std::size_t j = 0; j < shape_.cols; ++j)
    for (std::size_t i = 0; i < shape_.rows; ++i) {
      const double v = coeffs_(i + shape_.rows * j);
      if (v != 0.0) s.entries.push_back({i, j, v});
    }
  return s;
}

void Gradient::axpy(double w, const Gradient& other) {
  const bool same = other.shape_ == shape_ &&
                    (sampling_ == other.sampling_ ||
                     (sampling_ && other.sampling_ &&
                      sampling_->num_measurements() ==
                          other.sampling_->num_measurements()));
  if (!same || (sampling_ == nullptr) != (other.sampling_ == nullptr))
    throw InputError("gradient supports differ");
  coeffs_ += w * other.coeffs_;
}

Gradient Gradient::zeros_like() const {
  Gradient g = *this;
  g.coeffs_.setZero();
  return g;
}

// ---------------------------------------------------------------------------
// Objectives

Gradient FiniteSumObjective::term_grad(std::size_t i, const Vector& x) const {
  Gradient acc = zero_grad();
  add_term_grad(i, x, 1.0, acc);
  return acc;
}

QuadraticObjective::QuadraticObjective(DenseMatrix hessian, Vector linear,
                                       double constant)
    : c_(std::move(linear)), c0_(constant) {
  if (hessian.rows() != hessian.cols() || hessian.rows() != c_.size() ||
      c_.size() == 0)
    throw ParameterError("quadratic objective: inconsistent sizes");
  h_ = 0.5 * (hessian + hessian.transpose());
  smoothness_ = symmetric_spectral_norm(LinearOperator::from_dense(h_, true),
                                        0x51f0, 1e-12);
}

QuadraticObjective QuadraticObjective::squared_distance(const Vector& center) {
  const Eigen::Index n = center.size();
  return QuadraticObjective(DenseMatrix::Identity(n, n), center,
                            0.5 * center.squaredNorm());
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(h_ * x) - c_.dot(x) + c0_;
}

Gradient QuadraticObjective::full_grad(const Vector& x) const {
  return Gradient::dense(shape(), h_ * x - c_);
}

Gradient QuadraticObjective::zero_grad() const {
  return Gradient::dense(shape(), Vector::Zero(c_.size()));
}

void QuadraticObjective::add_term_grad(std::size_t i, const Vector& x,
                                       double weight, Gradient& acc) const {
  if (i != 0) throw ParameterError("quadratic objective has a single term");
  acc.coeffs() += weight * (h_ * x - c_);
}

LeastSquaresSum::LeastSquaresSum(DenseMatrix design, Vector targets)
    : a_(std::move(design)), b_(std::move(targets)) {
  if (a_.rows() == 0 || a_.cols() == 0 || a_.rows() != b_.size())
    throw ParameterError("least squares sum: inconsistent sizes");
  const double d = static_cast<double>(a_.rows());
  h_ = a_.transpose() * a_ / d;
  c_ = a_.transpose() * b_ / d;
  smoothness_ = a_.rowwise().squaredNorm().maxCoeff();
}

double LeastSquaresSum::value(const Vector& x) const {
  return 0.5 * (a_ * x - b_).squaredNorm() / static_cast<double>(a_.rows());
}

Gradient LeastSquaresSum::full_grad(const Vector& x) const {
  return Gradient::dense(shape(), h_ * x - c_);
}

Gradient LeastSquaresSum::zero_grad() const {
  return Gradient::dense(shape(), Vector::Zero(a_.cols()));
}

void LeastSquaresSum::add_term_grad(std::size_t i, const Vector& x,
                                    double weight, Gradient& acc) const {
  if (i >= num_terms()) throw ParameterError("term index out of range");
  const double r = a_.row(i).dot(x) - b_(i);
  acc.coeffs() += (weight * r) * a_.row(i).transpose();
}

LeastSquaresSum make_least_squares_sum(std::size_t terms, std::size_t dim,
                                       double truth_l1, std::uint64_t seed) {
  if (terms == 0 || dim == 0) throw ParameterError("empty least squares sum");
  Rng rng(seed);
  DenseMatrix a = gaussian_matrix(terms, dim, rng) /
                  std::sqrt(static_cast<double>(dim));
  Vector truth = Vector::Zero(dim);
  const std::size_t support = std::min<std::size_t>(5, dim);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  for (std::size_t s = 0; s < support; ++s) {
    const std::size_t i = (s * dim) / support;
    truth(i) = (s % 2 == 0 ? 1.0 : -1.0) * unif(rng);
  }
  truth *= truth_l1 / truth.lpNorm<1>();
  Vector b = a * truth + 0.1 * gaussian_vector(terms, rng);
  return LeastSquaresSum(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Completion instances

DenseMatrix CompletionInstance::truth() const {
  if (!has_truth()) throw DegenerateError("instance has no ground truth");
  return truth_left * truth_right.transpose();
}

namespace {

void check_generator_params(std::size_t m, std::size_t n, std::size_t r,
                            double noise_scale, double p) {
  if (m == 0 || n == 0) throw ParameterError("dimensions must be positive");
  if (r < 1 || r > std::min(m, n))
    throw ParameterError("rank must satisfy 1 <= r <= min(m, n)");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("sample rate must be in (0, 1]");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw ParameterError("noise scale must be finite and nonnegative");
}

void fill_observed(CompletionInstance& inst) {
  inst.observed = inst.sampling->apply(inst.noisy);
}

}  // namespace

CompletionInstance make_symmetric_completion(std::size_t n, std::size_t r,
                                             double noise_scale, double p,
                                             std::uint64_t seed) {
  check_generator_params(n, n, r, noise_scale, p);
  Rng rng(seed);
  CompletionInstance inst;
  inst.rows = inst.cols = n;
  inst.symmetric = true;
  inst.rank = r;
  inst.sample_rate = p;
  inst.noise_scale = noise_scale;
  inst.seed = seed;
  inst.truth_left = gaussian_matrix(n, r, rng);
  inst.truth_right = inst.truth_left;
  const DenseMatrix l = gaussian_matrix(n, n, rng);
  DenseMatrix c = inst.truth() + noise_scale * (l + l.transpose());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) c(j, i) = c(i, j);
  inst.noisy = std::move(c);

  std::bernoulli_distribution keep(p);
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i)
      if (keep(rng)) {
        entries.emplace_back(i, j);
        if (i != j) entries.emplace_back(j, i);
      }
  inst.sampling =
      std::make_shared<const SamplingOperator>(n, n, std::move(entries), true);
  fill_observed(inst);
  return inst;
}

CompletionInstance make_rectangular_completion(std::size_t m, std::size_t n,
                                               std::size_t r,
                                               double noise_scale, double p,
                                               std::uint64_t seed) {
  check_generator_params(m, n, r, noise_scale, p);
  Rng rng(seed);
  CompletionInstance inst;
  inst.rows = m;
  inst.cols = n;
  inst.symmetric = false;
  inst.rank = r;
  inst.sample_rate = p;
  inst.noise_scale = noise_scale;
  inst.seed = seed;
  inst.truth_left = gaussian_matrix(m, r, rng);
  inst.truth_right = gaussian_matrix(n, r, rng);
  inst.noisy = inst.truth() + noise_scale * gaussian_matrix(m, n, rng);

  std::bernoulli_distribution keep(p);
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (keep(rng)) entries.emplace_back(i, j);
  inst.sampling =
      std::make_shared<const SamplingOperator>(m, n, std::move(entries), false);
  fill_observed(inst);
  return inst;
}

void save_instance(const CompletionInstance& inst, const std::string& path) {
  if (!inst.sampling) throw InputError("instance has no sampling operator");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "%zu %zu %d %.17g %.17g %" PRIu64 "\n", inst.rows, inst.cols,
               inst.symmetric ? 1 : 0, inst.sample_rate, inst.noise_scale,
               inst.seed);
  const auto& s = *inst.sampling;
  for (std::size_t e = 0; e < s.num_measurements(); ++e)
    std::fprintf(f, "%zu %zu %.17g\n", s.row(e) + 1, s.col(e) + 1,
                 inst.observed(e));
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok)
    throw IoError("error while writing '" + path + "'");
}

CompletionInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CompletionInstance inst;
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": missing header");
  {
    std::istringstream hs(line);
    int sym = 0;
    if (!(hs >> inst.rows >> inst.cols >> sym >> inst.sample_rate >>
          inst.noise_scale >> inst.seed) ||
        (sym != 0 && sym != 1))
      throw InputError(path + ": malformed header");
    inst.symmetric = sym == 1;
  }
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v) || i == 0 || j == 0 || i > inst.rows ||
        j > inst.cols || !std::isfinite(v))
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed entry");
    entries.emplace_back(i - 1, j - 1);
    values.push_back(v);
  }
  // Keep values aligned with the operator's column-major ordering.
  std::vector<std::size_t> order(entries.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].second != entries[b].second
               ? entries[a].second < entries[b].second
               : entries[a].first < entries[b].first;
  });
  inst.sampling = std::make_shared<const SamplingOperator>(
      inst.rows, inst.cols, entries, inst.symmetric);
  inst.observed.resize(static_cast<Eigen::Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k)
    inst.observed(k) = values[order[k]];
  if (inst.symmetric) {
    const auto& s = *inst.sampling;
    for (std::size_t e = 0; e < s.num_measurements(); ++e)
      if (inst.observed(*s.find(s.col(e), s.row(e))) != inst.observed(e))
        throw InputError(path + ": symmetric instance has unequal mirrors");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// CompletionObjective

CompletionObjective::CompletionObjective(const CompletionInstance& inst,
                                         Scaling scaling)
    : sampling_(inst.sampling), c_(inst.observed), scaling_(scaling) {
  if (!sampling_ || sampling_->num_measurements() == 0)
    throw ParameterError("completion objective needs observed entries");
  const auto& s = *sampling_;
  term_offsets_.push_back(0);
  for (std::size_t e = 0; e < s.num_measurements(); ++e) {
    if (s.symmetric()) {
      if (s.row(e) > s.col(e)) continue;
      term_index_.push_back(e);
      if (s.row(e) != s.col(e))
        term_index_.push_back(*s.find(s.col(e), s.row(e)));
    } else {
      term_index_.push_back(e);
    }
    term_offsets_.push_back(term_index_.size());
  }
}

double CompletionObjective::weight() const {
  return scaling_ == Scaling::kPaperTotal
             ? 1.0
             : 1.0 / static_cast<double>(num_terms());
}

double CompletionObjective::value_from_measurements(const Vector& z) const {
  return 0.5 * weight() * (z - c_).squaredNorm();
}

Vector CompletionObjective::measurement_grad(const Vector& z) const {
  return weight() * (z - c_);
}

void CompletionObjective::add_term_measurement_grad(std::size_t i,
                                                    const Vector& z,
                                                    double weight,
                                                    Vector& acc) const {
  if (i >= num_terms()) throw ParameterError("term index out of range");
  // Term gradients average to the full gradient: scale by T * weight().
  const double s = weight * this->weight() * static_cast<double>(num_terms());
  for (std::size_t k = term_offsets_[i]; k < term_offsets_[i + 1]; ++k) {
    const std::size_t e = term_index_[k];
    acc(e) += s * (z(e) - c_(e));
  }
}

double CompletionObjective::value(const Vector& x) const {
  return value_from_measurements(sampling_->apply(x));
}

Gradient CompletionObjective::full_grad(const Vector& x) const {
  return Gradient::sampled(sampling_, measurement_grad(sampling_->apply(x)));
}

Gradient CompletionObjective::zero_grad() const {
  return Gradient::sampled(sampling_, Vector::Zero(c_.size()));
}

void CompletionObjective::add_term_grad(std::size_t i, const Vector& x,
                                        double weight, Gradient& acc) const {
  if (i >= num_terms()) throw ParameterError("term index out of range");
  if (acc.sampling() == nullptr ||
      acc.coeffs().size() != static_cast<Eigen::Index>(c_.size()))
    throw InputError("accumulator support differs from the objective");
  const double s = weight * this->weight() * static_cast<double>(num_terms());
  for (std::size_t k = term_offsets_[i]; k < term_offsets_[i + 1]; ++k) {
    const std::size_t e = term_index_[k];
    acc.coeffs()(e) += s * (x(sampling_->flat_index(e)) - c_(e));
  }
}

// ---------------------------------------------------------------------------
// Metrics

double relative_objective_from_measurements(const Vector& z,
                                            const CompletionInstance& inst) {
  const double denom = inst.observed.squaredNorm();
  if (denom == 0.0) throw DegenerateError("observed data is identically zero");
  require_finite(z, "measurement vector");
  return (z - inst.observed).squaredNorm() / denom;
}

RelativeMetrics relative_metrics(const DenseMatrix& x,
                                 const CompletionInstance& inst) {
  if (static_cast<std::size_t>(x.rows()) != inst.rows ||
      static_cast<std::size_t>(x.cols()) != inst.cols)
    throw InputError("relative_metrics: shape mismatch");
  if (!inst.has_truth()) throw DegenerateError("instance has no ground truth");
  const DenseMatrix x0 = inst.truth();
  const double t = x0.squaredNorm();
  if (t == 0.0) throw DegenerateError("ground truth is the zero matrix");
  RelativeMetrics m;
  m.rel_obj = relative_objective_from_measurements(inst.sampling->apply(x), inst);
  m.rel_err = (x - x0).squaredNorm() / t;
  return m;
}

RelativeMetrics relative_metrics(const Vector& x,
                                 const CompletionInstance& inst) {
  if (static_cast<std::size_t>(x.size()) != inst.rows * inst.cols)
    throw InputError("relative_metrics: shape mismatch");
  return relative_metrics(
      DenseMatrix(Eigen::Map<const DenseMatrix>(x.data(), inst.rows, inst.cols)),
      inst);
}

double nuclear_norm(const DenseMatrix& m) { return singular_values(m).sum(); }

}  // namespace fws
