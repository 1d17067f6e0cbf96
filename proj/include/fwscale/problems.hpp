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

// Matrix completion instances, the entry-sampling measurement map, and the
// finite-sum objectives consumed by the Frank-Wolfe drivers.

#ifndef FWSCALE_PROBLEMS_HPP_
#define FWSCALE_PROBLEMS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwscale/spectral.hpp"
#include "fwscale/types.hpp"

namespace fws {

// Entry-sampling map A: R^{rows x cols} -> R^d, (A X)_e = X(row_e, col_e).
// Its adjoint scatters a measurement vector back onto the sampled entries.
class SamplingOperator {
 public:
  // Entries are sorted column-major; duplicates are rejected.
  SamplingOperator(std::size_t rows, std::size_t cols,
                   std::vector<std::pair<std::size_t, std::size_t>> entries,
                   bool symmetric);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Shape shape() const { return {rows_, cols_}; }
  std::size_t num_measurements() const { return row_.size(); }
  bool symmetric() const { return symmetric_; }

  std::size_t row(std::size_t e) const { return row_[e]; }
  std::size_t col(std::size_t e) const { return col_[e]; }
  std::size_t flat_index(std::size_t e) const {
    return row_[e] + rows_ * col_[e];
  }
  // Measurement index of entry (i, j), if sampled.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;

  // x is a flattened rows x cols matrix.
  Vector apply(const Vector& x) const;
  Vector apply(const DenseMatrix& x) const;
  SparseEntries adjoint(const Vector& y) const;
  // A(scale * u v^T) in O(d).
  Vector apply_rank_one(double scale, const Vector& u, const Vector& v) const;

  // y = A^*(c) x and y = A^*(c)^T x without materializing A^*(c).
  void adjoint_matvec(const Vector& c, const Vector& x, Vector& y) const;
  void adjoint_rmatvec(const Vector& c, const Vector& x, Vector& y) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  bool symmetric_;
  std::vector<std::size_t> row_;
  std::vector<std::size_t> col_;
};

// A linear functional on the point space. Dense gradients carry one coefficient
// per point coordinate (column-major); sampled gradients carry one coefficient
// per measurement of a SamplingOperator and vanish off the sampled entries.
class Gradient {
 public:
  Gradient() = default;
  static Gradient dense(Shape shape, Vector coeffs);
  static Gradient sampled(std::shared_ptr<const SamplingOperator> sampling,
                          Vector coeffs);

  Shape shape() const { return shape_; }
  bool is_sampled() const { return sampling_ != nullptr; }
  const SamplingOperator* sampling() const { return sampling_.get(); }
  const std::shared_ptr<const SamplingOperator>& sampling_ptr() const {
    return sampling_;
  }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }

  // Trace inner product <G, x> with a point.
  double dot(const Vector& x) const;
  double frobenius_norm() const;
  bool all_finite() const;

  // The gradient as a matrix operator (rows x cols). Copies the coefficients.
  LinearOperator as_operator() const;
  DenseMatrix to_dense() const;
  SparseEntries to_sparse() const;

  // this += w * other; supports must agree.
  void axpy(double w, const Gradient& other);
  void scale(double w) { coeffs_ *= w; }
  Gradient zeros_like() const;

 private:
  Shape shape_;
  Vector coeffs_;
  std::shared_ptr<const SamplingOperator> sampling_;
};

enum class Scaling {
  kPaperTotal,  // f = 1/2 ||P_O(X) - P_O(C)||_F^2
  kMean,        // f = (1/T) sum_t f_t, each f_t 1-smooth
};

// f = (1/d) sum_i f_i over a point space of the given shape.
class FiniteSumObjective {
 public:
  virtual ~FiniteSumObjective() = default;

  virtual Shape shape() const = 0;
  virtual std::size_t num_terms() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Gradient full_grad(const Vector& x) const = 0;
  // Gradient with all coefficients zero and the objective's support.
  virtual Gradient zero_grad() const = 0;
  // acc += weight * grad f_i(x)
  virtual void add_term_grad(std::size_t i, const Vector& x, double weight,
                             Gradient& acc) const = 0;
  // Smoothness constant L for the convergence schedules: the per-term L for
  // finite sums used stochastically, the L of f itself otherwise.
  virtual double smoothness() const = 0;

  Gradient term_grad(std::size_t i, const Vector& x) const;
};

// f(x) = 1/2 x^T H x - c^T x + c0, a single term.
class QuadraticObjective : public FiniteSumObjective {
 public:
  QuadraticObjective(DenseMatrix hessian, Vector linear, double constant = 0.0);
  // f(x) = 1/2 ||x - center||^2.
  static QuadraticObjective squared_distance(const Vector& center);

  Shape shape() const override { return {static_cast<std::size_t>(c_.size()), 1}; }
  std::size_t num_terms() const override { return 1; }
  double value(const Vector& x) const override;
  Gradient full_grad(const Vector& x) const override;
  Gradient zero_grad() const override;
  void add_term_grad(std::size_t i, const Vector& x, double weight,
                     Gradient& acc) const override;
  double smoothness() const override { return smoothness_; }

 private:
  DenseMatrix h_;
  Vector c_;
  double c0_;
  double smoothness_;
};

// f(x) = (1/d) sum_i 1/2 (a_i^T x - b_i)^2 with a_i the rows of `design`.
class LeastSquaresSum : public FiniteSumObjective {
 public:
  LeastSquaresSum(DenseMatrix design, Vector targets);

  Shape shape() const override {
    return {static_cast<std::size_t>(a_.cols()), 1};
  }
  std::size_t num_terms() const override {
    return static_cast<std::size_t>(a_.rows());
  }
  double value(const Vector& x) const override;
  Gradient full_grad(const Vector& x) const override;
  Gradient zero_grad() const override;
  void add_term_grad(std::size_t i, const Vector& x, double weight,
                     Gradient& acc) const override;
  // max_i ||a_i||^2
  double smoothness() const override { return smoothness_; }

  const DenseMatrix& design() const { return a_; }
  const Vector& targets() const { return b_; }

 private:
  DenseMatrix a_;
  Vector b_;
  DenseMatrix h_;  // A^T A / d
  Vector c_;       // A^T b / d
  double smoothness_;
};

// Random least-squares finite sum: a_i ~ N(0, I / dim), b = A x_true + 0.1 n
// with x_true a sparse vector of l1 norm `truth_l1`.
LeastSquaresSum make_least_squares_sum(std::size_t terms, std::size_t dim,
                                       double truth_l1, std::uint64_t seed);

struct CompletionInstance {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool symmetric = false;
  std::size_t rank = 0;  // 0 when the truth is unknown (loaded instances)
  double sample_rate = 1.0;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;

  // Ground truth X0 = left * right^T. Empty when unknown.
  DenseMatrix truth_left;
  DenseMatrix truth_right;
  // Full noisy matrix C = X0 + E. Empty when unknown.
  DenseMatrix noisy;

  std::shared_ptr<const SamplingOperator> sampling;
  Vector observed;  // c_e = C(row_e, col_e)

  bool has_truth() const { return truth_left.size() > 0; }
  DenseMatrix truth() const;
  std::size_t num_observed() const { return observed.size(); }
};

// X0 = W W^T, C = X0 + noise_scale (L + L^T), each upper-triangular entry
// (diagonal included) observed with probability p and mirrored.
CompletionInstance make_symmetric_completion(std::size_t n, std::size_t r,
                                             double noise_scale, double p,
                                             std::uint64_t seed);

// X0 = W1 W2^T, C = X0 + noise_scale L, each entry observed with probability p.
CompletionInstance make_rectangular_completion(std::size_t m, std::size_t n,
                                               std::size_t r,
                                               double noise_scale, double p,
                                               std::uint64_t seed);

// Plain text: header `m n symmetric p noise_scale seed`, then one 1-based
// `i j value` line per observed entry, floats as %.17g.
void save_instance(const CompletionInstance& inst, const std::string& path);
CompletionInstance load_instance(const std::string& path);

// Squared loss on the observed entries. Symmetric instances group each
// observed unordered pair {(i,j), (j,i)} into one term so that every term
// gradient is symmetric; rectangular instances use one term per entry.
class CompletionObjective : public FiniteSumObjective {
 public:
  CompletionObjective(const CompletionInstance& inst, Scaling scaling);

  Shape shape() const override { return sampling_->shape(); }
  std::size_t num_terms() const override { return term_offsets_.size() - 1; }
  double value(const Vector& x) const override;
  Gradient full_grad(const Vector& x) const override;
  Gradient zero_grad() const override;
  void add_term_grad(std::size_t i, const Vector& x, double weight,
                     Gradient& acc) const override;
  double smoothness() const override { return 1.0; }

  Scaling scaling() const { return scaling_; }
  const std::shared_ptr<const SamplingOperator>& sampling() const {
    return sampling_;
  }
  const Vector& observed() const { return c_; }

  // Measurement-space forms, z = A X.
  double value_from_measurements(const Vector& z) const;
  Vector measurement_grad(const Vector& z) const;
  void add_term_measurement_grad(std::size_t i, const Vector& z, double weight,
                                 Vector& acc) const;
  // Measurement indices belonging to term i.
  std::pair<std::size_t, std::size_t> term_range(std::size_t i) const {
    return {term_offsets_[i], term_offsets_[i + 1]};
  }
  std::size_t term_measurement(std::size_t k) const { return term_index_[k]; }

 private:
  double weight() const;  // 1 for paper-total, 1/T for mean

  std::shared_ptr<const SamplingOperator> sampling_;
  Vector c_;
  Scaling scaling_;
  std::vector<std::size_t> term_offsets_;
  std::vector<std::size_t> term_index_;
};

struct RelativeMetrics {
  double rel_obj = 0.0;  // ||P_O(X) - P_O(C)||^2 / ||P_O(C)||^2
  double rel_err = 0.0;  // ||X - X0||^2 / ||X0||^2
};

// x is a flattened rows x cols matrix. Throws DegenerateError when the truth
// is unknown or zero, or when ||P_O(C)|| = 0.
RelativeMetrics relative_metrics(const Vector& x, const CompletionInstance& inst);
RelativeMetrics relative_metrics(const DenseMatrix& x,
                                 const CompletionInstance& inst);
// rel_obj from measurements z = A X alone.
double relative_objective_from_measurements(const Vector& z,
                                            const CompletionInstance& inst);

double nuclear_norm(const DenseMatrix& m);

}  // namespace fws

#endif  // FWSCALE_PROBLEMS_HPP_
